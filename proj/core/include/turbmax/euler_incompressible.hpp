#pragma once

#include <vector>

#include "turbmax/measure.hpp"
#include "turbmax/testfuncs.hpp"
#include "turbmax/weakform.hpp"

namespace turbmax {

/// Initial data for the incompressible equations: a velocity field on the
/// spatial torus with its kinetic energy (midpoint quadrature).
class IncompressibleData {
public:
    explicit IncompressibleData(SpatialField v0);

    const SpatialField& v0() const noexcept { return v0_; }
    double initial_energy() const noexcept { return initial_energy_; }

private:
    SpatialField v0_;
    double initial_energy_;
};

/// Weak-form residual of the divergence constraint: for each scalar test,
/// the integral of <nu, v> . grad(psi) over the cylinder.
std::vector<TestResidual> residual_mass(const DiscreteYoungMeasure& Y,
                                        const TestFunctionDictionary& dict);

/// Weak-form residual of the momentum equations against divergence-free
/// vector tests: transport and stress moments of the oscillation part, the
/// concentration stress paired with the test gradient, and the initial-data
/// boundary term.  Throws if a vector test is not divergence free.
std::vector<TestResidual> residual_momentum(const DiscreteYoungMeasure& Y,
                                            const IncompressibleData& data,
                                            const TestFunctionDictionary& dict);

/// Both residual families plus worst-case summaries.
WeakFormReport weak_form_report(const DiscreteYoungMeasure& Y, const IncompressibleData& data,
                                const TestFunctionDictionary& dict);

/// Slab-by-slab energy inequality against the initial kinetic energy.
AdmissibilityReport check_admissibility(const DiscreteYoungMeasure& Y,
                                        const IncompressibleData& data, double tol = 1e-10);

} // namespace turbmax
