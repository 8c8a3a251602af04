#pragma once

// Model-specific instance builders used by both suites.

#include <cmath>
#include <numbers>
#include <utility>

#include "support/random_measures.hpp"
#include "turbmax/euler_compressible.hpp"

namespace testsupport {

struct AdmissibleCompressible {
    turbmax::DiscreteYoungMeasure measure;
    turbmax::CompressibleData data;
};

// A random compressible measure paired with a constant initial state whose
// energy dominates every time slab, so the instance is admissible by
// construction (no final layer, hence disintegration holds).
inline AdmissibleCompressible random_admissible_compressible(Rng& rng, double gamma) {
    const int d = uniform_int(rng, 1, 2);
    const int nt = uniform_int(rng, 1, 3);
    const int nx = uniform_int(rng, 1, 3);
    const double T = uniform(rng, 0.5, 2.0);
    const turbmax::SpaceTimeGrid grid(T, d, nt, nx, false);
    const turbmax::GrowthStructure g = turbmax::GrowthStructure::isentropic(gamma);
    MeasureOptions opt;
    opt.amplitude = 1.0;
    auto Y = random_measure(rng, grid, d + 1, g, opt);

    // probe with unit density to locate the peak slab energy
    turbmax::SpatialField rho1(d, nx, 1);
    for (std::size_t c = 0; c < rho1.cell_count(); ++c) {
        rho1.at(c)[0] = 1.0;
    }
    turbmax::SpatialField u0(d, nx, d);
    const turbmax::CompressibleData probe(gamma, rho1, std::move(u0));
    const auto report = turbmax::check_admissibility(Y, probe);
    double peak = 0.0;
    for (const double e : report.slice_energy) {
        peak = std::max(peak, e);
    }

    // resting state whose internal energy tops that peak
    const double volume = std::pow(2.0 * std::numbers::pi, d);
    const double headroom = uniform(rng, 0.05, 1.0);
    const double rho_star =
        std::pow((gamma - 1.0) * peak * (1.0 + headroom) / volume, 1.0 / gamma);
    turbmax::SpatialField rho0(d, nx, 1);
    for (std::size_t c = 0; c < rho0.cell_count(); ++c) {
        rho0.at(c)[0] = rho_star;
    }
    turbmax::SpatialField u0b(d, nx, d);
    turbmax::CompressibleData data(gamma, std::move(rho0), std::move(u0b));
    return {std::move(Y), std::move(data)};
}

} // namespace testsupport
