#pragma once

#include <vector>

#include "turbmax/measure.hpp"
#include "turbmax/testfuncs.hpp"
#include "turbmax/weakform.hpp"

namespace turbmax {

/// Initial data for the isentropic equations: density and velocity on the
/// spatial torus plus the adiabatic exponent.  The stored energy integrates
/// rho |u|^2 / 2 + rho^gamma / (gamma - 1) by midpoint quadrature.
class CompressibleData {
public:
    CompressibleData(double gamma, SpatialField rho0, SpatialField u0);

    double gamma() const noexcept { return gamma_; }
    const SpatialField& rho0() const noexcept { return rho0_; }
    const SpatialField& u0() const noexcept { return u0_; }
    double initial_energy() const noexcept { return initial_energy_; }

private:
    double gamma_;
    SpatialField rho0_;
    SpatialField u0_;
    double initial_energy_;
};

/// Certificate data for the a-priori concentration-mass estimate: total
/// concentration mass against max{2, gamma - 1} * T * E0.
struct LambdaMassBound {
    double lambda_total = 0.0;
    double bound = 0.0;
    double slack = 0.0;
    bool holds = false;
};

/// Weak-form residual of the continuity equation: time moment <nu, a1>,
/// flux moment <nu, sqrt(a1) a'>, and the initial-density boundary term.
/// The concentration part does not enter the continuity equation.
std::vector<TestResidual> residual_mass(const DiscreteYoungMeasure& Y,
                                        const CompressibleData& data,
                                        const TestFunctionDictionary& dict);

/// Weak-form residual of the momentum equations: transport moment
/// <nu, sqrt(a1) a'>, stress <nu, a' x a'>, pressure <nu, a1^gamma> against
/// the test divergence, the concentration stress and pressure, and the
/// initial-momentum boundary term.  Tests are not required to be divergence
/// free.
std::vector<TestResidual> residual_momentum(const DiscreteYoungMeasure& Y,
                                            const CompressibleData& data,
                                            const TestFunctionDictionary& dict);

/// Both residual families plus worst-case summaries.
WeakFormReport weak_form_report(const DiscreteYoungMeasure& Y, const CompressibleData& data,
                                const TestFunctionDictionary& dict);

/// Slab-by-slab energy inequality: kinetic plus internal energy of the
/// oscillation part, plus the concentration energy weighted by the recession
/// of the energy integrand, against the initial total energy.
AdmissibilityReport check_admissibility(const DiscreteYoungMeasure& Y,
                                        const CompressibleData& data, double tol = 1e-10);

/// Concentration-mass estimate implied by admissibility.  A violation on an
/// admissible measure indicates a defect in the measure or the checker, not
/// a tolerance issue.
LambdaMassBound lambda_mass_bound(const DiscreteYoungMeasure& Y, const CompressibleData& data);

} // namespace turbmax
