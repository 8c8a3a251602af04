#pragma once

// Random instance generators shared by the unit and acceptance suites.  All
// randomness flows through the caller's engine, so a fixed seed pins every
// instance.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "turbmax/grid.hpp"
#include "turbmax/growth.hpp"
#include "turbmax/measure.hpp"

namespace testsupport {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double gaussian(Rng& rng, double sigma = 1.0) {
    return std::normal_distribution<double>(0.0, sigma)(rng);
}

// Weights strictly inside the simplex whose sum is exactly 1.
inline std::vector<double> random_weights(Rng& rng, std::size_t n) {
    std::exponential_distribution<double> draw(1.0);
    std::vector<double> w(n);
    double sum = 0.0;
    for (double& x : w) {
        x = draw(rng) + 1e-3;
        sum += x;
    }
    double partial = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        w[i] /= sum;
        partial += w[i];
    }
    w[n - 1] = 1.0 - partial;
    return w;
}

struct MeasureOptions {
    int max_atoms = 3;
    double concentration_prob = 0.5;
    int max_angles = 2;
    double amplitude = 2.0;
    // Density components stay at or above this floor, comfortably clear of
    // the vacuum guard.
    double density_floor = 0.1;
};

inline std::vector<double> random_phase_point(Rng& rng, int m, const turbmax::GrowthStructure& g,
                                              const MeasureOptions& opt) {
    std::vector<double> z(static_cast<std::size_t>(m));
    for (double& zi : z) {
        zi = gaussian(rng, opt.amplitude);
    }
    if (g.kind() == turbmax::GrowthKind::Isentropic) {
        z[0] = std::abs(z[0]) + opt.density_floor;
    }
    return z;
}

inline std::vector<double> random_angle(Rng& rng, int m, const turbmax::GrowthStructure& g) {
    MeasureOptions unit;
    unit.amplitude = 1.0;
    for (;;) {
        std::vector<double> z = random_phase_point(rng, m, g, unit);
        double n2 = 0.0;
        for (const double zi : z) {
            n2 += zi * zi;
        }
        if (n2 < 1e-4) {
            continue;
        }
        return g.project(z).theta;
    }
}

inline turbmax::DiscreteYoungMeasure random_measure(Rng& rng, const turbmax::SpaceTimeGrid& grid,
                                                    int m, const turbmax::GrowthStructure& g,
                                                    const MeasureOptions& opt = {}) {
    std::vector<turbmax::CellMeasure> cells(grid.cell_count());
    for (std::size_t c = 0; c < grid.cell_count(); ++c) {
        turbmax::CellMeasure& cm = cells[c];
        if (!grid.is_final_layer(c)) {
            const int k = uniform_int(rng, 1, opt.max_atoms);
            const std::vector<double> w = random_weights(rng, static_cast<std::size_t>(k));
            for (int a = 0; a < k; ++a) {
                cm.atoms.push_back(
                    {random_phase_point(rng, m, g, opt), w[static_cast<std::size_t>(a)]});
            }
        }
        if (opt.concentration_prob > 0.0 && uniform(rng, 0.0, 1.0) < opt.concentration_prob) {
            cm.lambda_mass = uniform(rng, 0.1, 1.0);
            const int k = uniform_int(rng, 1, opt.max_angles);
            const std::vector<double> w = random_weights(rng, static_cast<std::size_t>(k));
            for (int a = 0; a < k; ++a) {
                cm.angle_atoms.push_back(
                    {random_angle(rng, m, g), w[static_cast<std::size_t>(a)]});
            }
        }
    }
    return turbmax::DiscreteYoungMeasure(grid, m, g, std::move(cells));
}

inline turbmax::SpaceTimeGrid random_grid(Rng& rng, bool allow_final_layer = true) {
    const int d = uniform_int(rng, 1, 3);
    const int nt = uniform_int(rng, 1, 3);
    const int nx = uniform_int(rng, 1, 3);
    const double T = uniform(rng, 0.5, 2.0);
    const bool fl = allow_final_layer && uniform_int(rng, 0, 1) == 1;
    return turbmax::SpaceTimeGrid(T, d, nt, nx, fl);
}

// A partner with bit-near-identical cell barycenters: each interior cell
// carries a symmetric two-point spread around the original barycenter.
// Concentration data is redrawn freely; it never enters the barycenter.
inline turbmax::DiscreteYoungMeasure equal_barycenter_partner(
    Rng& rng, const turbmax::DiscreteYoungMeasure& Y, double spread) {
    const turbmax::SpaceTimeGrid& grid = Y.grid();
    const int m = Y.phase_dim();
    const turbmax::GrowthStructure& g = Y.growth();
    std::vector<turbmax::CellMeasure> cells(grid.cell_count());
    for (std::size_t c = 0; c < grid.cell_count(); ++c) {
        const turbmax::CellMeasure& src = Y.cell(c);
        turbmax::CellMeasure& cm = cells[c];
        if (!grid.is_final_layer(c)) {
            std::vector<double> b(static_cast<std::size_t>(m), 0.0);
            for (const turbmax::PhaseAtom& a : src.atoms) {
                for (int i = 0; i < m; ++i) {
                    b[static_cast<std::size_t>(i)] += a.w * a.z[static_cast<std::size_t>(i)];
                }
            }
            std::vector<double> delta(static_cast<std::size_t>(m));
            for (double& di : delta) {
                di = uniform(rng, -spread, spread);
            }
            if (g.kind() == turbmax::GrowthKind::Isentropic) {
                // keep both split points clear of the vacuum guard
                const double room = 0.5 * (b[0] - 1e-3);
                delta[0] = std::clamp(delta[0], -room, room);
            }
            std::vector<double> lo(b), hi(b);
            for (int i = 0; i < m; ++i) {
                lo[static_cast<std::size_t>(i)] -= delta[static_cast<std::size_t>(i)];
                hi[static_cast<std::size_t>(i)] += delta[static_cast<std::size_t>(i)];
            }
            cm.atoms.push_back({std::move(lo), 0.5});
            cm.atoms.push_back({std::move(hi), 0.5});
        }
        if (uniform(rng, 0.0, 1.0) < 0.5) {
            cm.lambda_mass = uniform(rng, 0.1, 1.0);
            cm.angle_atoms.push_back({random_angle(rng, m, g), 1.0});
        }
    }
    return turbmax::DiscreteYoungMeasure(grid, m, g, std::move(cells));
}

// A partner whose every cell barycenter is shifted by the given vector; the
// shift is applied atom by atom, so barycenters move by exactly that vector.
inline turbmax::DiscreteYoungMeasure shifted_partner(const turbmax::DiscreteYoungMeasure& Y,
                                                     const std::vector<double>& shift) {
    const turbmax::SpaceTimeGrid& grid = Y.grid();
    std::vector<turbmax::CellMeasure> cells(grid.cell_count());
    for (std::size_t c = 0; c < grid.cell_count(); ++c) {
        cells[c] = Y.cell(c);
        for (turbmax::PhaseAtom& a : cells[c].atoms) {
            for (std::size_t i = 0; i < shift.size(); ++i) {
                a.z[i] += shift[i];
            }
        }
    }
    return turbmax::DiscreteYoungMeasure(grid, Y.phase_dim(), Y.growth(), std::move(cells));
}

} // namespace testsupport
