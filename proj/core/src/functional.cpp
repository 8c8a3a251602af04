#include "turbmax/functional.hpp"

#include <cmath>
#include <stdexcept>

#include "turbmax/summation.hpp"

namespace turbmax {

double report_scale(const FunctionalReport& r) {
    return 1.0 + std::abs(r.oscillation_part) + std::abs(r.concentration_part);
}

FunctionalReport jensen_defect(const DiscreteYoungMeasure& Y, const ConvexIntegrand& f) {
    if (!f.growth().compatible_with(Y.growth())) {
        throw std::invalid_argument("jensen_defect: integrand growth does not match the measure");
    }
    const SpaceTimeGrid& g = Y.grid();
    const double vol = g.cell_volume();
    const std::size_t m = static_cast<std::size_t>(Y.phase_dim());
    const std::size_t interior = g.interior_cell_count();

    FunctionalReport out;
    out.defect_density.assign(interior, 0.0);
    std::vector<double> energy_density(interior, 0.0);

    thread_local std::vector<double> bbuf;
    out.oscillation_part = deterministic_sum(interior, [&](std::size_t c) {
        const CellMeasure& cm = Y.cell(c);
        bbuf.assign(m, 0.0);
        double mean_f = 0.0;
        for (const PhaseAtom& a : cm.atoms) {
            mean_f += a.w * f.eval(a.z);
            for (std::size_t i = 0; i < m; ++i) {
                bbuf[i] += a.w * a.z[i];
            }
        }
        const double defect = mean_f - f.eval(bbuf);
        out.defect_density[c] = defect;
        energy_density[c] = mean_f;
        return vol * defect;
    });

    out.concentration_part = deterministic_sum(g.cell_count(), [&](std::size_t c) {
        const CellMeasure& cm = Y.cell(c);
        if (cm.lambda_mass == 0.0) {
            return 0.0;
        }
        double rec = 0.0;
        for (const AngleAtom& a : cm.angle_atoms) {
            rec += a.w * f.recession(a.theta);
        }
        return cm.lambda_mass * rec;
    });

    const double oscillation_energy =
        deterministic_sum(interior, [&](std::size_t c) { return vol * energy_density[c]; });

    out.value = out.oscillation_part + out.concentration_part;
    out.total_energy = oscillation_energy + out.concentration_part;
    if (!std::isfinite(out.value)) {
        throw std::domain_error("jensen_defect: functional value is not finite");
    }
    return out;
}

FunctionalReport variance_functional(const DiscreteYoungMeasure& Y) {
    if (Y.growth().kind() != GrowthKind::PowerP || Y.growth().exponent() != 2.0) {
        throw std::invalid_argument(
            "variance_functional: defined for quadratic growth only; use jensen_defect with a "
            "matching integrand instead");
    }
    return jensen_defect(Y, ConvexIntegrand::squared_norm());
}

double total_energy(const DiscreteYoungMeasure& Y, const ConvexIntegrand& f) {
    return pairing(Y, f);
}

double concavity_gap(const DiscreteYoungMeasure& Y1, const DiscreteYoungMeasure& Y2, double tau,
                     const ConvexIntegrand& f) {
    const DiscreteYoungMeasure mix = convex_combine(Y1, Y2, tau);
    const FunctionalReport rm = jensen_defect(mix, f);
    const FunctionalReport r1 = jensen_defect(Y1, f);
    const FunctionalReport r2 = jensen_defect(Y2, f);
    return rm.value - tau * r1.value - (1.0 - tau) * r2.value;
}

} // namespace turbmax
