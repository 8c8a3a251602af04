#include "turbmax/euler_compressible.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "turbmax/summation.hpp"

namespace turbmax {

namespace {

void require_compressible_shape(const DiscreteYoungMeasure& Y, const CompressibleData& data,
                                const char* who) {
    if (Y.growth().kind() != GrowthKind::Isentropic) {
        throw std::invalid_argument(std::string(who) +
                                    ": compressible measures use isentropic growth");
    }
    if (Y.growth().exponent() != data.gamma()) {
        std::ostringstream os;
        os << who << ": measure gamma " << Y.growth().exponent() << " does not match data gamma "
           << data.gamma();
        throw std::invalid_argument(os.str());
    }
    if (Y.phase_dim() != Y.grid().d() + 1) {
        std::ostringstream os;
        os << who << ": phase dimension " << Y.phase_dim() << " must be 1 + d = "
           << Y.grid().d() + 1;
        throw std::invalid_argument(os.str());
    }
    const SpatialField& rho0 = data.rho0();
    if (rho0.d() != Y.grid().d() || rho0.nx() != Y.grid().nx()) {
        throw std::invalid_argument(std::string(who) +
                                    ": initial data does not match the measure's grid");
    }
}

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (const double x : v) {
        s += x * x;
    }
    return std::sqrt(s);
}

/// Per-cell moments of the oscillation part needed by the weak form:
/// density <a1>, momentum <sqrt(a1) a'>, stress <a' x a'>, pressure
/// <a1^gamma>; and per-cell concentration stress lambda*<b' x b'> with
/// pressure trace lambda*<b1^gamma>.
struct CompressibleMoments {
    std::vector<double> density;      // interior cells
    std::vector<double> momentum;     // interior cells x d
    std::vector<double> stress;       // interior cells x d x d
    std::vector<double> pressure;     // interior cells
    std::vector<double> conc_stress;  // all cells x d x d
    std::vector<double> conc_pressure; // all cells
};

CompressibleMoments collect_moments(const DiscreteYoungMeasure& Y, double gamma) {
    const SpaceTimeGrid& g = Y.grid();
    const std::size_t d = static_cast<std::size_t>(g.d());
    const std::size_t interior = g.interior_cell_count();
    const std::size_t all = g.cell_count();
    CompressibleMoments m;
    m.density.assign(interior, 0.0);
    m.momentum.assign(interior * d, 0.0);
    m.stress.assign(interior * d * d, 0.0);
    m.pressure.assign(interior, 0.0);
    m.conc_stress.assign(all * d * d, 0.0);
    m.conc_pressure.assign(all, 0.0);

    for (std::size_t c = 0; c < all; ++c) {
        const CellMeasure& cm = Y.cell(c);
        if (c < interior) {
            double* mom = m.momentum.data() + c * d;
            double* st = m.stress.data() + c * d * d;
            for (const PhaseAtom& a : cm.atoms) {
                const double a1 = a.z[0];
                const double sq = std::sqrt(a1);
                m.density[c] += a.w * a1;
                m.pressure[c] += a.w * std::pow(a1, gamma);
                for (std::size_t i = 0; i < d; ++i) {
                    mom[i] += a.w * sq * a.z[1 + i];
                    for (std::size_t j = 0; j < d; ++j) {
                        st[i * d + j] += a.w * a.z[1 + i] * a.z[1 + j];
                    }
                }
            }
        }
        if (cm.lambda_mass > 0.0) {
            double* st = m.conc_stress.data() + c * d * d;
            for (const AngleAtom& a : cm.angle_atoms) {
                const double wl = a.w * cm.lambda_mass;
                m.conc_pressure[c] += wl * std::pow(a.theta[0], gamma);
                for (std::size_t i = 0; i < d; ++i) {
                    for (std::size_t j = 0; j < d; ++j) {
                        st[i * d + j] += wl * a.theta[1 + i] * a.theta[1 + j];
                    }
                }
            }
        }
    }
    return m;
}

} // namespace

CompressibleData::CompressibleData(double gamma, SpatialField rho0, SpatialField u0)
    : gamma_(gamma), rho0_(std::move(rho0)), u0_(std::move(u0)) {
    if (!(gamma_ > 1.0) || !std::isfinite(gamma_)) {
        throw std::invalid_argument("CompressibleData: gamma must be finite and > 1");
    }
    if (rho0_.value_dim() != 1) {
        throw std::invalid_argument("CompressibleData: rho0 must be a scalar field");
    }
    if (u0_.d() != rho0_.d() || u0_.nx() != rho0_.nx() || u0_.value_dim() != rho0_.d()) {
        throw std::invalid_argument("CompressibleData: u0 must be a d-vector field on rho0's grid");
    }
    for (std::size_t c = 0; c < rho0_.cell_count(); ++c) {
        if (!(rho0_.at(c)[0] > 0.0)) {
            std::ostringstream os;
            os << "CompressibleData: rho0 must be strictly positive, cell " << c << " has "
               << rho0_.at(c)[0];
            throw std::invalid_argument(os.str());
        }
    }
    const double volx = std::pow(2.0 * std::numbers::pi / rho0_.nx(), rho0_.d());
    const double gm1 = gamma_ - 1.0;
    initial_energy_ = deterministic_sum(rho0_.cell_count(), [&](std::size_t c) {
        const double rho = rho0_.at(c)[0];
        const auto u = u0_.at(c);
        double u2 = 0.0;
        for (const double v : u) {
            u2 += v * v;
        }
        return volx * (0.5 * rho * u2 + std::pow(rho, gamma_) / gm1);
    });
}

std::vector<TestResidual> residual_mass(const DiscreteYoungMeasure& Y,
                                        const CompressibleData& data,
                                        const TestFunctionDictionary& dict) {
    require_compressible_shape(Y, data, "residual_mass");
    const SpaceTimeGrid& g = Y.grid();
    const std::size_t d = static_cast<std::size_t>(g.d());
    const double vol = g.cell_volume();
    const double volx = g.spatial_cell_volume();
    const CompressibleMoments m = collect_moments(Y, data.gamma());
    const double yscale = measure_scale(Y);

    std::vector<TestResidual> out;
    out.reserve(dict.scalars.size());
    std::vector<double> xs(d), grads(d);
    for (const ScalarTestFunction& psi : dict.scalars) {
        double test_scale = 0.0;
        for (std::size_t c = 0; c < g.interior_cell_count(); ++c) {
            double t = 0.0;
            g.cell_center(c, t, xs);
            psi.gradient(t, xs, grads);
            test_scale = std::max(test_scale, std::abs(psi.dt(t, xs)) + norm2(grads));
        }
        double init_scale = 0.0;
        for (std::size_t sc = 0; sc < g.spatial_cell_count(); ++sc) {
            g.spatial_center(sc, xs);
            init_scale = std::max(init_scale, std::abs(psi.value(0.0, xs)));
        }

        const double interior = deterministic_sum(g.interior_cell_count(), [&](std::size_t c) {
            thread_local std::vector<double> x;
            thread_local std::vector<double> grad;
            x.resize(d);
            grad.resize(d);
            double t = 0.0;
            g.cell_center(c, t, x);
            psi.gradient(t, x, grad);
            const double* mom = m.momentum.data() + c * d;
            double flux = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                flux += mom[i] * grad[i];
            }
            return vol * (m.density[c] * psi.dt(t, x) + flux);
        });
        const double initial = deterministic_sum(g.spatial_cell_count(), [&](std::size_t sc) {
            thread_local std::vector<double> x;
            x.resize(d);
            g.spatial_center(sc, x);
            return volx * data.rho0().at(sc)[0] * psi.value(0.0, x);
        });

        TestResidual r;
        r.label = psi.label;
        r.raw = interior + initial;
        const double scale = test_scale + init_scale;
        r.normalized = scale > 0.0 ? r.raw / (scale * yscale) : 0.0;
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<TestResidual> residual_momentum(const DiscreteYoungMeasure& Y,
                                            const CompressibleData& data,
                                            const TestFunctionDictionary& dict) {
    require_compressible_shape(Y, data, "residual_momentum");
    const SpaceTimeGrid& g = Y.grid();
    const std::size_t d = static_cast<std::size_t>(g.d());
    const double vol = g.cell_volume();
    const double volx = g.spatial_cell_volume();
    const CompressibleMoments m = collect_moments(Y, data.gamma());
    const double yscale = measure_scale(Y);

    std::vector<TestResidual> out;
    out.reserve(dict.vectors.size());
    std::vector<double> xs(d), phi_ts(d), grads(d * d), phi0s(d);
    for (const VectorTestFunction& phi : dict.vectors) {
        double test_scale = 0.0;
        for (std::size_t c = 0; c < g.interior_cell_count(); ++c) {
            double t = 0.0;
            g.cell_center(c, t, xs);
            phi.dt(t, xs, phi_ts);
            phi.gradient(t, xs, grads);
            test_scale = std::max(test_scale,
                                  norm2(phi_ts) + norm2(grads) + std::abs(phi.divergence(t, xs)));
        }
        double init_scale = 0.0;
        for (std::size_t sc = 0; sc < g.spatial_cell_count(); ++sc) {
            g.spatial_center(sc, xs);
            phi.value(0.0, xs, phi0s);
            init_scale = std::max(init_scale, norm2(phi0s));
        }

        const double interior = deterministic_sum(g.cell_count(), [&](std::size_t c) {
            thread_local std::vector<double> x;
            thread_local std::vector<double> phi_t;
            thread_local std::vector<double> grad;
            x.resize(d);
            phi_t.resize(d);
            grad.resize(d * d);
            double t = 0.0;
            g.cell_center(c, t, x);
            phi.gradient(t, x, grad);
            const double div = phi.divergence(t, x);
            double term = 0.0;
            if (!g.is_final_layer(c)) {
                phi.dt(t, x, phi_t);
                const double* mom = m.momentum.data() + c * d;
                double transport = 0.0;
                for (std::size_t i = 0; i < d; ++i) {
                    transport += mom[i] * phi_t[i];
                }
                const double* st = m.stress.data() + c * d * d;
                double contraction = 0.0;
                for (std::size_t i = 0; i < d * d; ++i) {
                    contraction += st[i] * grad[i];
                }
                term += vol * (transport + contraction + m.pressure[c] * div);
            }
            const double* cst = m.conc_stress.data() + c * d * d;
            double conc = 0.0;
            for (std::size_t i = 0; i < d * d; ++i) {
                conc += cst[i] * grad[i];
            }
            conc += m.conc_pressure[c] * div;
            return term + conc;
        });
        const double initial = deterministic_sum(g.spatial_cell_count(), [&](std::size_t sc) {
            thread_local std::vector<double> x;
            thread_local std::vector<double> phi0;
            x.resize(d);
            phi0.resize(d);
            g.spatial_center(sc, x);
            phi.value(0.0, x, phi0);
            const double rho = data.rho0().at(sc)[0];
            const auto u = data.u0().at(sc);
            double dot = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                dot += rho * u[i] * phi0[i];
            }
            return volx * dot;
        });

        TestResidual r;
        r.label = phi.label;
        r.raw = interior + initial;
        const double scale = test_scale + init_scale;
        r.normalized = scale > 0.0 ? r.raw / (scale * yscale) : 0.0;
        out.push_back(std::move(r));
    }
    return out;
}

WeakFormReport weak_form_report(const DiscreteYoungMeasure& Y, const CompressibleData& data,
                                const TestFunctionDictionary& dict) {
    WeakFormReport rep;
    rep.mass = residual_mass(Y, data, dict);
    rep.momentum = residual_momentum(Y, data, dict);
    for (std::size_t i = 0; i < rep.mass.size(); ++i) {
        const double a = std::abs(rep.mass[i].normalized);
        if (a > rep.max_mass) {
            rep.max_mass = a;
            rep.worst_mass_index = i;
        }
    }
    for (std::size_t i = 0; i < rep.momentum.size(); ++i) {
        const double a = std::abs(rep.momentum[i].normalized);
        if (a > rep.max_momentum) {
            rep.max_momentum = a;
            rep.worst_momentum_index = i;
        }
    }
    return rep;
}

AdmissibilityReport check_admissibility(const DiscreteYoungMeasure& Y,
                                        const CompressibleData& data, double tol) {
    require_compressible_shape(Y, data, "check_admissibility");
    const SpaceTimeGrid& g = Y.grid();
    const std::size_t d = static_cast<std::size_t>(g.d());
    const double volx = g.spatial_cell_volume();
    const double dt = g.dt();
    const double gamma = data.gamma();
    const double gm1 = gamma - 1.0;
    const std::size_t per_slice = g.spatial_cell_count();

    AdmissibilityReport rep;
    rep.tol = tol;
    rep.initial_energy = data.initial_energy();
    rep.final_layer_mass = Y.final_layer_mass();
    rep.time_disintegration_ok = rep.final_layer_mass == 0.0;

    rep.slice_energy.resize(static_cast<std::size_t>(g.nt()));
    rep.slice_margin.resize(static_cast<std::size_t>(g.nt()));
    rep.slice_lambda_mass.resize(static_cast<std::size_t>(g.nt()));
    for (int s = 0; s < g.nt(); ++s) {
        const std::size_t base = static_cast<std::size_t>(s) * per_slice;
        CompensatedSum osc;
        CompensatedSum conc;
        CompensatedSum lam;
        for (std::size_t i = 0; i < per_slice; ++i) {
            const CellMeasure& cm = Y.cell(base + i);
            double e = 0.0;
            for (const PhaseAtom& a : cm.atoms) {
                double m2 = 0.0;
                for (std::size_t j = 0; j < d; ++j) {
                    m2 += a.z[1 + j] * a.z[1 + j];
                }
                e += a.w * (0.5 * m2 + std::pow(a.z[0], gamma) / gm1);
            }
            osc.add(volx * e);
            lam.add(cm.lambda_mass);
            if (cm.lambda_mass > 0.0) {
                double ce = 0.0;
                for (const AngleAtom& a : cm.angle_atoms) {
                    double b2 = 0.0;
                    for (std::size_t j = 0; j < d; ++j) {
                        b2 += a.theta[1 + j] * a.theta[1 + j];
                    }
                    ce += a.w * (0.5 * b2 + std::pow(a.theta[0], gamma) / gm1);
                }
                conc.add(cm.lambda_mass * ce);
            }
        }
        const double energy = osc.value() + conc.value() / dt;
        rep.slice_lambda_mass[static_cast<std::size_t>(s)] = lam.value() / dt;
        rep.slice_energy[static_cast<std::size_t>(s)] = energy;
        rep.slice_margin[static_cast<std::size_t>(s)] = rep.initial_energy - energy;
    }
    rep.min_margin = rep.slice_margin[0];
    rep.worst_slice = 0;
    for (std::size_t s = 1; s < rep.slice_margin.size(); ++s) {
        if (rep.slice_margin[s] < rep.min_margin) {
            rep.min_margin = rep.slice_margin[s];
            rep.worst_slice = s;
        }
    }
    rep.admissible = rep.time_disintegration_ok && rep.min_margin >= -tol;
    return rep;
}

LambdaMassBound lambda_mass_bound(const DiscreteYoungMeasure& Y, const CompressibleData& data) {
    require_compressible_shape(Y, data, "lambda_mass_bound");
    LambdaMassBound b;
    b.lambda_total = Y.lambda_total();
    b.bound = std::max(2.0, data.gamma() - 1.0) * Y.grid().T() * data.initial_energy();
    b.slack = b.bound - b.lambda_total;
    // Tiny relative slack absorbs roundoff in the two quadratures.
    b.holds = b.lambda_total <= b.bound * (1.0 + 1e-12);
    return b;
}

} // namespace turbmax
