#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "support/random_measures.hpp"
#include "turbmax/integrand.hpp"
#include "turbmax/measure.hpp"

using namespace turbmax;
using testsupport::Rng;

namespace {

DiscreteYoungMeasure two_atom_measure(const SpaceTimeGrid& grid, double a, double w) {
    std::vector<CellMeasure> cells(grid.cell_count());
    for (std::size_t c = 0; c < grid.interior_cell_count(); ++c) {
        cells[c].atoms.push_back({{a, 0.0}, w});
        cells[c].atoms.push_back({{-a, 0.0}, 1.0 - w});
    }
    return DiscreteYoungMeasure(grid, 2, GrowthStructure::quadratic(), std::move(cells));
}

} // namespace

TEST_CASE("measure validation rejects broken cell data") {
    const SpaceTimeGrid grid(1.0, 1, 1, 1);
    const GrowthStructure q = GrowthStructure::quadratic();

    SUBCASE("weights must sum to one") {
        std::vector<CellMeasure> cells(1);
        cells[0].atoms.push_back({{1.0}, 0.9});
        CHECK_THROWS_AS(DiscreteYoungMeasure(grid, 1, q, std::move(cells)),
                        std::invalid_argument);
    }
    SUBCASE("interior cells need atoms") {
        std::vector<CellMeasure> cells(1);
        CHECK_THROWS_AS(DiscreteYoungMeasure(grid, 1, q, std::move(cells)),
                        std::invalid_argument);
    }
    SUBCASE("negative concentration mass") {
        std::vector<CellMeasure> cells(1);
        cells[0].atoms.push_back({{1.0}, 1.0});
        cells[0].lambda_mass = -0.5;
        CHECK_THROWS_AS(DiscreteYoungMeasure(grid, 1, q, std::move(cells)),
                        std::invalid_argument);
    }
    SUBCASE("angle atoms require concentration mass") {
        std::vector<CellMeasure> cells(1);
        cells[0].atoms.push_back({{1.0}, 1.0});
        cells[0].angle_atoms.push_back({{1.0}, 1.0});
        CHECK_THROWS_AS(DiscreteYoungMeasure(grid, 1, q, std::move(cells)),
                        std::invalid_argument);
    }
    SUBCASE("concentration mass requires angle atoms") {
        std::vector<CellMeasure> cells(1);
        cells[0].atoms.push_back({{1.0}, 1.0});
        cells[0].lambda_mass = 0.5;
        CHECK_THROWS_AS(DiscreteYoungMeasure(grid, 1, q, std::move(cells)),
                        std::invalid_argument);
    }
    SUBCASE("angle atoms must sit on the recession surface") {
        std::vector<CellMeasure> cells(1);
        cells[0].atoms.push_back({{1.0}, 1.0});
        cells[0].lambda_mass = 0.5;
        cells[0].angle_atoms.push_back({{1.5}, 1.0});
        CHECK_THROWS_AS(DiscreteYoungMeasure(grid, 1, q, std::move(cells)),
                        std::invalid_argument);
    }
    SUBCASE("nonfinite entries are rejected") {
        std::vector<CellMeasure> cells(1);
        cells[0].atoms.push_back({{std::nan("")}, 1.0});
        CHECK_THROWS_AS(DiscreteYoungMeasure(grid, 1, q, std::move(cells)),
                        std::invalid_argument);
    }
}

TEST_CASE("isentropic measures reject vacuum oscillation atoms") {
    const SpaceTimeGrid grid(1.0, 1, 1, 1);
    const GrowthStructure g = GrowthStructure::isentropic(1.4);
    std::vector<CellMeasure> cells(1);
    cells[0].atoms.push_back({{0.0, 1.0}, 1.0});
    CHECK_THROWS_AS(DiscreteYoungMeasure(grid, 2, g, std::move(cells)), std::invalid_argument);

    // beta1 = 0 on the recession surface is legitimate
    std::vector<CellMeasure> ok(1);
    ok[0].atoms.push_back({{1.0, 0.5}, 1.0});
    ok[0].lambda_mass = 0.3;
    ok[0].angle_atoms.push_back({{0.0, 1.0}, 1.0});
    CHECK_NOTHROW(DiscreteYoungMeasure(grid, 2, g, std::move(ok)));
}

TEST_CASE("final layer cells are atom-free and may carry concentration mass") {
    const SpaceTimeGrid grid(1.0, 1, 1, 2, true);
    const GrowthStructure q = GrowthStructure::quadratic();
    std::vector<CellMeasure> cells(grid.cell_count());
    cells[0].atoms.push_back({{1.0}, 1.0});
    cells[1].atoms.push_back({{1.0}, 1.0});
    cells[2].lambda_mass = 0.25;
    cells[2].angle_atoms.push_back({{1.0}, 1.0});

    SUBCASE("valid layout") {
        const DiscreteYoungMeasure Y(grid, 1, q, std::move(cells));
        CHECK(Y.lambda_total() == doctest::Approx(0.25));
        CHECK(Y.final_layer_mass() == doctest::Approx(0.25));
    }
    SUBCASE("atoms on the final layer are rejected") {
        cells[3].atoms.push_back({{1.0}, 1.0});
        CHECK_THROWS_AS(DiscreteYoungMeasure(grid, 1, q, std::move(cells)),
                        std::invalid_argument);
    }
}

TEST_CASE("young_of_function samples the field at cell midpoints") {
    const SpaceTimeGrid grid(1.0, 2, 2, 4);
    const auto Y = young_of_function(
        grid, 2, GrowthStructure::quadratic(),
        [](double t, std::span<const double> x, std::span<double> out) {
            out[0] = std::sin(x[1]);
            out[1] = t;
        });
    const PhaseField b = barycenter(Y);
    double t = 0.0;
    std::vector<double> x(2);
    for (std::size_t c = 0; c < grid.interior_cell_count(); ++c) {
        Y.grid().cell_center(c, t, x);
        CHECK(b.at(c)[0] == doctest::Approx(std::sin(x[1])));
        CHECK(b.at(c)[1] == doctest::Approx(t));
        CHECK(Y.cell(c).atoms.size() == 1);
    }
}

TEST_CASE("pairing integrates oscillation and concentration parts") {
    const SpaceTimeGrid grid(1.0, 2, 2, 2);
    const double volume = grid.T() * std::pow(2.0 * std::numbers::pi, 2);

    std::vector<CellMeasure> cells(grid.cell_count());
    for (std::size_t c = 0; c < grid.cell_count(); ++c) {
        cells[c].atoms.push_back({{3.0, 4.0}, 1.0});
        cells[c].lambda_mass = 0.5;
        cells[c].angle_atoms.push_back({{0.0, 1.0}, 1.0});
    }
    const DiscreteYoungMeasure Y(grid, 2, GrowthStructure::quadratic(), std::move(cells));
    const ConvexIntegrand f = ConvexIntegrand::squared_norm();

    // <nu, f> = 25 everywhere, f_rec = 1 on the sphere, lambda total = 4
    const double expect = 25.0 * volume + 1.0 * 0.5 * 8.0;
    CHECK(pairing(Y, f) == doctest::Approx(expect));

    // phi weighted by time only: oscillation gets the midpoint quadrature of
    // phi, concentration multiplies cell for cell
    const double p = pairing(Y, f, [](double t, std::span<const double>) { return t; });
    const double phi_quad = 0.5;  // midpoint average of t on (0,1)
    CHECK(p == doctest::Approx(25.0 * volume * phi_quad + 0.5 * 8.0 * phi_quad));
}

TEST_CASE("pairing is linear in the test function") {
    Rng rng(11);
    const SpaceTimeGrid grid(1.0, 2, 2, 2);
    const auto Y = testsupport::random_measure(rng, grid, 2, GrowthStructure::quadratic());
    const ConvexIntegrand f = ConvexIntegrand::squared_norm();
    const auto phi1 = [](double t, std::span<const double> x) { return t + std::cos(x[0]); };
    const auto phi2 = [](double, std::span<const double> x) { return std::sin(x[1]); };
    const double a = 0.7;
    const double b = -1.3;
    const double lhs = pairing(Y, f, [&](double t, std::span<const double> x) {
        return a * phi1(t, x) + b * phi2(t, x);
    });
    const double rhs = a * pairing(Y, f, phi1) + b * pairing(Y, f, phi2);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
}

TEST_CASE("convex_combine merges atoms and interpolates concentration") {
    const SpaceTimeGrid grid(1.0, 1, 1, 1);
    const GrowthStructure q = GrowthStructure::quadratic();

    std::vector<CellMeasure> c1(1);
    c1[0].atoms.push_back({{1.0}, 1.0});
    c1[0].lambda_mass = 1.0;
    c1[0].angle_atoms.push_back({{1.0}, 1.0});
    const DiscreteYoungMeasure Y1(grid, 1, q, std::move(c1));

    std::vector<CellMeasure> c2(1);
    c2[0].atoms.push_back({{1.0}, 0.5});  // bitwise equal to Y1's atom: merges
    c2[0].atoms.push_back({{2.0}, 0.5});
    c2[0].lambda_mass = 3.0;
    c2[0].angle_atoms.push_back({{-1.0}, 1.0});
    const DiscreteYoungMeasure Y2(grid, 1, q, std::move(c2));

    const double tau = 0.25;
    const DiscreteYoungMeasure mix = convex_combine(Y1, Y2, tau);
    const CellMeasure& cm = mix.cell(0);
    REQUIRE(cm.atoms.size() == 2);
    CHECK(cm.atoms[0].z[0] == 1.0);
    CHECK(cm.atoms[0].w == doctest::Approx(0.25 + 0.75 * 0.5));
    CHECK(cm.atoms[1].z[0] == 2.0);
    CHECK(cm.atoms[1].w == doctest::Approx(0.75 * 0.5));

    // lambda interpolates; angle weights carry each parent's share
    CHECK(cm.lambda_mass == doctest::Approx(0.25 * 1.0 + 0.75 * 3.0));
    REQUIRE(cm.angle_atoms.size() == 2);
    const double lam = 0.25 + 2.25;
    CHECK(cm.angle_atoms[0].w == doctest::Approx(0.25 / lam));
    CHECK(cm.angle_atoms[1].w == doctest::Approx(2.25 / lam));
}

TEST_CASE("convex combination at the endpoints returns the endpoint content") {
    Rng rng(5);
    const SpaceTimeGrid grid(1.0, 1, 2, 2);
    const auto Y1 = testsupport::random_measure(rng, grid, 1, GrowthStructure::quadratic());
    const auto Y2 = testsupport::random_measure(rng, grid, 1, GrowthStructure::quadratic());
    const ConvexIntegrand f = ConvexIntegrand::squared_norm();
    CHECK(pairing(convex_combine(Y1, Y2, 1.0), f) == doctest::Approx(pairing(Y1, f)));
    CHECK(pairing(convex_combine(Y1, Y2, 0.0), f) == doctest::Approx(pairing(Y2, f)));
}

TEST_CASE("pairings of combinations are the weighted pairings") {
    Rng rng(17);
    for (int rep = 0; rep < 50; ++rep) {
        const SpaceTimeGrid grid = testsupport::random_grid(rng);
        const bool isen = testsupport::uniform_int(rng, 0, 1) == 1;
        const GrowthStructure g =
            isen ? GrowthStructure::isentropic(1.4) : GrowthStructure::quadratic();
        const int m = isen ? grid.d() + 1 : 2;
        const auto Y1 = testsupport::random_measure(rng, grid, m, g);
        const auto Y2 = testsupport::random_measure(rng, grid, m, g);
        const double tau = testsupport::uniform(rng, 0.0, 1.0);
        const ConvexIntegrand f =
            isen ? ConvexIntegrand::isentropic_energy(1.4) : ConvexIntegrand::squared_norm();
        const auto phi = [](double t, std::span<const double> x) {
            return 1.0 + 0.5 * std::sin(t + x[0]);
        };
        const double mixed = pairing(convex_combine(Y1, Y2, tau), f, phi);
        const double split = tau * pairing(Y1, f, phi) + (1.0 - tau) * pairing(Y2, f, phi);
        CHECK(mixed == doctest::Approx(split).epsilon(1e-12));
    }
}

TEST_CASE("n-ary combination drops zero weights exactly") {
    Rng rng(23);
    const SpaceTimeGrid grid(1.0, 1, 1, 2);
    std::vector<DiscreteYoungMeasure> ys;
    for (int i = 0; i < 3; ++i) {
        ys.push_back(testsupport::random_measure(rng, grid, 1, GrowthStructure::quadratic()));
    }
    const std::vector<double> theta{0.25, 0.0, 0.75};
    const auto mix = convex_combine_n(ys, theta);
    const ConvexIntegrand f = ConvexIntegrand::squared_norm();
    const double expect = 0.25 * pairing(ys[0], f) + 0.75 * pairing(ys[2], f);
    CHECK(pairing(mix, f) == doctest::Approx(expect).epsilon(1e-13));

    // nothing of the zero-weight candidate's atoms may appear
    for (std::size_t c = 0; c < grid.cell_count(); ++c) {
        const std::size_t max_atoms =
            ys[0].cell(c).atoms.size() + ys[2].cell(c).atoms.size();
        CHECK(mix.cell(c).atoms.size() <= max_atoms);
    }
}

TEST_CASE("combine validates weights and grids") {
    Rng rng(31);
    const SpaceTimeGrid grid(1.0, 1, 1, 2);
    const auto Y1 = testsupport::random_measure(rng, grid, 1, GrowthStructure::quadratic());
    const auto Y2 = testsupport::random_measure(rng, grid, 1, GrowthStructure::quadratic());
    CHECK_THROWS_AS(convex_combine(Y1, Y2, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(convex_combine(Y1, Y2, -0.1), std::invalid_argument);

    const SpaceTimeGrid other(1.0, 1, 1, 3);
    const auto Y3 = testsupport::random_measure(rng, other, 1, GrowthStructure::quadratic());
    CHECK_THROWS_AS(convex_combine(Y1, Y3, 0.5), std::invalid_argument);

    const auto Yi = testsupport::random_measure(rng, grid, 2, GrowthStructure::isentropic(2.0));
    CHECK_THROWS_AS(convex_combine(Y1, Yi, 0.5), std::invalid_argument);
}

TEST_CASE("variance of a symmetric two-point measure") {
    const SpaceTimeGrid grid(1.0, 2, 2, 2);
    const DiscreteYoungMeasure Y = two_atom_measure(grid, 1.5, 0.25);
    const PhaseField b = barycenter(Y);
    // barycenter = (2w - 1) a
    CHECK(b.at(0)[0] == doctest::Approx(-0.5 * 1.5));
    CHECK(b.at(0)[1] == doctest::Approx(0.0));
}

TEST_CASE("measure_scale combines first moments and concentration mass") {
    const SpaceTimeGrid grid(1.0, 1, 1, 1);
    std::vector<CellMeasure> cells(1);
    cells[0].atoms.push_back({{3.0}, 1.0});
    cells[0].lambda_mass = 2.0;
    cells[0].angle_atoms.push_back({{1.0}, 1.0});
    const DiscreteYoungMeasure Y(grid, 1, GrowthStructure::quadratic(), std::move(cells));
    const double volume = 2.0 * std::numbers::pi;
    CHECK(measure_scale(Y) == doctest::Approx(1.0 + 3.0 * volume + 2.0));
}
