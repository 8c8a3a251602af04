#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "turbmax/grid.hpp"

namespace turbmax {

/// Residual of the weak form against one test function.  raw is the assembled
/// integral; normalized divides by the test function's size on the grid and
/// by measure_scale of the measure, so tolerances can be grid-independent.
struct TestResidual {
    std::string label;
    double raw = 0.0;
    double normalized = 0.0;
};

struct WeakFormReport {
    std::vector<TestResidual> mass;
    std::vector<TestResidual> momentum;
    double max_mass = 0.0;
    double max_momentum = 0.0;
    std::size_t worst_mass_index = 0;
    std::size_t worst_momentum_index = 0;
};

/// Per-time-slab energy audit.  The cell concentration masses divided by dt
/// act as the slab's share of the concentration measure; a positive mass on
/// the t = T sheet cannot be produced by any per-slab density, so it is
/// reported separately and fails the audit.
/// Default acceptance threshold for normalized residuals: 10 * C * h^2 with
/// h the coarser relative mesh width.  Midpoint quadrature of the test
/// functions' time derivatives leaves an O(h^2) residual on any classical
/// solution sampled onto the grid; C is calibrated so the sampled shear flow
/// sits at a tenth of the threshold.
inline double default_residual_tol(const SpaceTimeGrid& grid) {
    constexpr double kShearFlowCalibration = 0.05;
    const double h = std::max(1.0 / grid.nt(), 1.0 / grid.nx());
    return 10.0 * kShearFlowCalibration * h * h;
}

struct AdmissibilityReport {
    double initial_energy = 0.0;
    std::vector<double> slice_energy;
    std::vector<double> slice_margin;
    std::vector<double> slice_lambda_mass;
    double min_margin = 0.0;
    std::size_t worst_slice = 0;
    double final_layer_mass = 0.0;
    bool time_disintegration_ok = true;
    bool admissible = false;
    double tol = 0.0;
};

} // namespace turbmax
