#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>
#include <vector>

#include "support/random_measures.hpp"
#include "turbmax/euler_incompressible.hpp"
#include "turbmax/measure.hpp"
#include "turbmax/testfuncs.hpp"

using namespace turbmax;
using testsupport::Rng;

namespace {

// steady shear flow v(x) = (sin x2, 0, ...): an exact solution
DiscreteYoungMeasure shear_measure(const SpaceTimeGrid& grid) {
    return young_of_function(grid, grid.d(), GrowthStructure::quadratic(),
                             [](double, std::span<const double> x, std::span<double> out) {
                                 out[0] = std::sin(x[1]);
                                 for (std::size_t i = 1; i < out.size(); ++i) {
                                     out[i] = 0.0;
                                 }
                             });
}

SpatialField shear_data_field(int d, int nx) {
    SpatialField v0(d, nx, d);
    SpaceTimeGrid helper(1.0, d, 1, nx);
    std::vector<double> x(static_cast<std::size_t>(d));
    for (std::size_t c = 0; c < v0.cell_count(); ++c) {
        helper.spatial_center(c, x);
        v0.at(c)[0] = std::sin(x[1]);
        for (int i = 1; i < d; ++i) {
            v0.at(c)[static_cast<std::size_t>(i)] = 0.0;
        }
    }
    return v0;
}

DiscreteYoungMeasure symmetric_mixture(const SpaceTimeGrid& grid,
                                       const std::vector<double>& a) {
    std::vector<CellMeasure> cells(grid.cell_count());
    std::vector<double> neg(a);
    for (double& x : neg) {
        x = -x;
    }
    for (std::size_t c = 0; c < grid.interior_cell_count(); ++c) {
        cells[c].atoms.push_back({a, 0.5});
        cells[c].atoms.push_back({neg, 0.5});
    }
    return DiscreteYoungMeasure(grid, grid.d(), GrowthStructure::quadratic(),
                                std::move(cells));
}

} // namespace

TEST_CASE("initial kinetic energy by midpoint quadrature") {
    // v0 = (sin x2, 0): E0 = (1/2) * (2 pi)^2 / 2 (spatial trig sums are exact)
    const IncompressibleData data(shear_data_field(2, 8));
    const double volume = std::pow(2.0 * std::numbers::pi, 2);
    CHECK(data.initial_energy() == doctest::Approx(0.25 * volume).epsilon(1e-13));
}

TEST_CASE("shear flow residuals vanish to quadrature order and decay at order two") {
    double prev = 0.0;
    int level = 0;
    for (const int n : {8, 16, 32}) {
        const SpaceTimeGrid grid(1.0, 2, n, n);
        const auto Y = shear_measure(grid);
        const IncompressibleData data(shear_data_field(2, n));
        const auto dict = TestFunctionDictionary::incompressible(grid.T(), 2);
        const auto wf = weak_form_report(Y, data, dict);
        // divergence-free mass residual is exact
        CHECK(wf.max_mass <= 1e-12);
        CHECK(wf.max_momentum <= default_residual_tol(grid));
        if (level > 0) {
            const double order = std::log2(prev / wf.max_momentum);
            CHECK(order >= 1.9);
        }
        prev = wf.max_momentum;
        ++level;
    }
    CHECK(prev <= 1e-3);
}

TEST_CASE("momentum residuals reject non-divergence-free tests") {
    const SpaceTimeGrid grid(1.0, 2, 2, 4);
    const auto Y = shear_measure(grid);
    const IncompressibleData data(shear_data_field(2, 4));
    TestFunctionDictionary dict;
    dict.vectors.push_back(VectorTestFunction{
        TimeProfile::decaying_power(1, grid.T()),
        SpatialMode::wave({1, 0}, false),
        {1.0, 0.0},
        false,
        "bad"});
    CHECK_THROWS_AS(residual_momentum(Y, data, dict), std::invalid_argument);
}

TEST_CASE("symmetric mixture is a weak solution from rest but not admissible") {
    const SpaceTimeGrid grid(1.0, 2, 8, 8);
    const std::vector<double> a{0.8, -0.6};
    const auto Y = symmetric_mixture(grid, a);
    const IncompressibleData rest(SpatialField(2, 8, 2));
    const auto dict = TestFunctionDictionary::incompressible(grid.T(), 2);
    const auto wf = weak_form_report(Y, rest, dict);
    CHECK(wf.max_mass <= 1e-12);
    CHECK(wf.max_momentum <= 1e-12);

    const auto adm = check_admissibility(Y, rest);
    const double margin = -0.5 * 1.0 * std::pow(2.0 * std::numbers::pi, 2);
    CHECK(adm.initial_energy == 0.0);
    CHECK(adm.min_margin == doctest::Approx(margin).epsilon(1e-12));
    CHECK_FALSE(adm.admissible);
    CHECK(adm.time_disintegration_ok);
}

TEST_CASE("admissibility counts concentration mass per slab") {
    const SpaceTimeGrid grid(2.0, 2, 2, 2);
    std::vector<CellMeasure> cells(grid.cell_count());
    for (std::size_t c = 0; c < grid.cell_count(); ++c) {
        cells[c].atoms.push_back({{0.0, 0.0}, 1.0});
    }
    // lambda = 0.3 on one cell of the second slab
    cells[grid.spatial_cell_count() + 1].lambda_mass = 0.3;
    cells[grid.spatial_cell_count() + 1].angle_atoms.push_back({{1.0, 0.0}, 1.0});
    const DiscreteYoungMeasure Y(grid, 2, GrowthStructure::quadratic(), std::move(cells));

    SpatialField v0(2, 2, 2);
    for (std::size_t c = 0; c < v0.cell_count(); ++c) {
        v0.at(c)[0] = 1.0;
    }
    const IncompressibleData data(v0);
    const auto adm = check_admissibility(Y, data);
    // slab 0: zero energy; slab 1: (1/2) * lambda / dt with dt = 1
    CHECK(adm.slice_energy[0] == doctest::Approx(0.0));
    CHECK(adm.slice_energy[1] == doctest::Approx(0.15));
    CHECK(adm.slice_lambda_mass[1] == doctest::Approx(0.3));
    CHECK(adm.min_margin == doctest::Approx(data.initial_energy() - 0.15));
    CHECK(adm.admissible);
}

TEST_CASE("mass on the final layer breaks time disintegration") {
    const SpaceTimeGrid grid(1.0, 2, 2, 2, true);
    std::vector<CellMeasure> cells(grid.cell_count());
    for (std::size_t c = 0; c < grid.interior_cell_count(); ++c) {
        cells[c].atoms.push_back({{0.0, 0.0}, 1.0});
    }
    cells[grid.interior_cell_count()].lambda_mass = 0.1;
    cells[grid.interior_cell_count()].angle_atoms.push_back({{0.0, 1.0}, 1.0});
    const DiscreteYoungMeasure Y(grid, 2, GrowthStructure::quadratic(), std::move(cells));

    SpatialField v0(2, 2, 2);
    for (std::size_t c = 0; c < v0.cell_count(); ++c) {
        v0.at(c)[0] = 10.0;
    }
    const IncompressibleData data(v0);
    const auto adm = check_admissibility(Y, data);
    CHECK(adm.final_layer_mass == doctest::Approx(0.1));
    CHECK_FALSE(adm.time_disintegration_ok);
    CHECK_FALSE(adm.admissible);
    CHECK(adm.min_margin > 0.0);  // slab margins alone would pass
}

TEST_CASE("incompressible checks demand matching shapes") {
    Rng rng(71);
    const SpaceTimeGrid grid(1.0, 2, 2, 2);
    const auto Yc = testsupport::random_measure(rng, grid, 3, GrowthStructure::isentropic(2.0));
    const IncompressibleData data(SpatialField(2, 2, 2));
    const auto dict = TestFunctionDictionary::incompressible(grid.T(), 2);
    CHECK_THROWS_AS(weak_form_report(Yc, data, dict), std::invalid_argument);
    CHECK_THROWS_AS(check_admissibility(Yc, data), std::invalid_argument);
}
