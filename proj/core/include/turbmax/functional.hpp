#pragma once

#include <vector>

#include "turbmax/measure.hpp"

namespace turbmax {

/// Breakdown of the defect functional at one measure.  value is the sum of
/// the two parts; total_energy pairs the full measure against the integrand
/// without subtracting anything.
struct FunctionalReport {
    double value = 0.0;
    double oscillation_part = 0.0;
    double concentration_part = 0.0;
    double total_energy = 0.0;
    /// Per interior cell: <nu_c, f> - f(barycenter_c); always >= 0 for convex
    /// f up to roundoff.
    std::vector<double> defect_density;
};

/// Normalizer for tolerance checks against a report: 1 + |oscillation_part| +
/// |concentration_part|.
double report_scale(const FunctionalReport& r);

/// The Jensen-defect ("turbulence") functional: oscillation excess of f over
/// its value at the barycenter, integrated over the cylinder, plus the
/// concentration mass weighted by the recession of f.  Nonnegative for convex
/// f; zero exactly on measures of classical functions.
FunctionalReport jensen_defect(const DiscreteYoungMeasure& Y, const ConvexIntegrand& f);

/// jensen_defect with f = |z|^2: the cellwise variance of the oscillation
/// part plus the total concentration mass.  Only defined for quadratic
/// growth.
FunctionalReport variance_functional(const DiscreteYoungMeasure& Y);

/// Pairing of the full measure with f (oscillation energy plus recession-
/// weighted concentration mass), no barycenter subtraction.
double total_energy(const DiscreteYoungMeasure& Y, const ConvexIntegrand& f);

/// V_f(tau Y1 + (1-tau) Y2) - tau V_f(Y1) - (1-tau) V_f(Y2).  Nonnegative by
/// concavity; for strictly convex f and tau in (0,1) it vanishes exactly when
/// the barycenter fields agree cell by cell.
double concavity_gap(const DiscreteYoungMeasure& Y1, const DiscreteYoungMeasure& Y2, double tau,
                     const ConvexIntegrand& f);

} // namespace turbmax
