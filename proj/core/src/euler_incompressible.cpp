#include "turbmax/euler_incompressible.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "turbmax/summation.hpp"

namespace turbmax {

namespace {

void require_incompressible_shape(const DiscreteYoungMeasure& Y, const char* who) {
    if (!Y.growth().is_quadratic()) {
        throw std::invalid_argument(std::string(who) +
                                    ": incompressible measures use quadratic growth");
    }
    if (Y.phase_dim() != Y.grid().d()) {
        std::ostringstream os;
        os << who << ": phase dimension " << Y.phase_dim() << " does not match spatial dimension "
           << Y.grid().d();
        throw std::invalid_argument(os.str());
    }
}

void require_matching_data(const DiscreteYoungMeasure& Y, const IncompressibleData& data,
                           const char* who) {
    const SpatialField& v0 = data.v0();
    if (v0.d() != Y.grid().d() || v0.nx() != Y.grid().nx() || v0.value_dim() != Y.grid().d()) {
        throw std::invalid_argument(std::string(who) +
                                    ": initial data does not match the measure's grid");
    }
}

// Second moment of the oscillation part per interior cell, row-major d x d.
std::vector<double> second_moments(const DiscreteYoungMeasure& Y) {
    const std::size_t d = static_cast<std::size_t>(Y.phase_dim());
    const std::size_t n = Y.grid().interior_cell_count();
    std::vector<double> out(n * d * d, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
        double* M = out.data() + c * d * d;
        for (const PhaseAtom& a : Y.cell(c).atoms) {
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = 0; j < d; ++j) {
                    M[i * d + j] += a.w * a.z[i] * a.z[j];
                }
            }
        }
    }
    return out;
}

// Concentration stress per cell: lambda_c * <nu_inf, theta x theta>.
std::vector<double> concentration_stress(const DiscreteYoungMeasure& Y) {
    const std::size_t d = static_cast<std::size_t>(Y.phase_dim());
    const std::size_t n = Y.grid().cell_count();
    std::vector<double> out(n * d * d, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
        const CellMeasure& cm = Y.cell(c);
        if (cm.lambda_mass == 0.0) {
            continue;
        }
        double* M = out.data() + c * d * d;
        for (const AngleAtom& a : cm.angle_atoms) {
            const double wl = a.w * cm.lambda_mass;
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = 0; j < d; ++j) {
                    M[i * d + j] += wl * a.theta[i] * a.theta[j];
                }
            }
        }
    }
    return out;
}

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (const double x : v) {
        s += x * x;
    }
    return std::sqrt(s);
}

} // namespace

IncompressibleData::IncompressibleData(SpatialField v0) : v0_(std::move(v0)) {
    if (v0_.value_dim() != v0_.d()) {
        throw std::invalid_argument("IncompressibleData: v0 must be a d-vector field");
    }
    const double volx = std::pow(2.0 * std::numbers::pi / v0_.nx(), v0_.d());
    initial_energy_ = deterministic_sum(v0_.cell_count(), [&](std::size_t c) {
        const auto v = v0_.at(c);
        double e = 0.0;
        for (const double x : v) {
            e += x * x;
        }
        return 0.5 * volx * e;
    });
}

std::vector<TestResidual> residual_mass(const DiscreteYoungMeasure& Y,
                                        const TestFunctionDictionary& dict) {
    require_incompressible_shape(Y, "residual_mass");
    const SpaceTimeGrid& g = Y.grid();
    const std::size_t d = static_cast<std::size_t>(g.d());
    const double vol = g.cell_volume();
    const PhaseField b = barycenter(Y);
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
            test_scale = std::max(test_scale, norm2(grads));
        }
        const double raw = deterministic_sum(g.interior_cell_count(), [&](std::size_t c) {
            thread_local std::vector<double> x;
            thread_local std::vector<double> grad;
            x.resize(d);
            grad.resize(d);
            double t = 0.0;
            g.cell_center(c, t, x);
            psi.gradient(t, x, grad);
            const auto bc = b.at(c);
            double dot = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                dot += bc[i] * grad[i];
            }
            return vol * dot;
        });
        TestResidual r;
        r.label = psi.label;
        r.raw = raw;
        r.normalized = test_scale > 0.0 ? raw / (test_scale * yscale) : 0.0;
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<TestResidual> residual_momentum(const DiscreteYoungMeasure& Y,
                                            const IncompressibleData& data,
                                            const TestFunctionDictionary& dict) {
    require_incompressible_shape(Y, "residual_momentum");
    require_matching_data(Y, data, "residual_momentum");
    const SpaceTimeGrid& g = Y.grid();
    const std::size_t d = static_cast<std::size_t>(g.d());
    const double vol = g.cell_volume();
    const double volx = g.spatial_cell_volume();
    const PhaseField b = barycenter(Y);
    const std::vector<double> mom2 = second_moments(Y);
    const std::vector<double> stress = concentration_stress(Y);
    const double yscale = measure_scale(Y);

    std::vector<TestResidual> out;
    out.reserve(dict.vectors.size());
    std::vector<double> xs(d), phi_ts(d), grads(d * d), phi0s(d);
    for (const VectorTestFunction& phi : dict.vectors) {
        if (!phi.divergence_free) {
            throw std::invalid_argument("residual_momentum: test '" + phi.label +
                                        "' is not divergence free");
        }
        double test_scale = 0.0;
        for (std::size_t c = 0; c < g.interior_cell_count(); ++c) {
            double t = 0.0;
            g.cell_center(c, t, xs);
            phi.dt(t, xs, phi_ts);
            phi.gradient(t, xs, grads);
            test_scale = std::max(test_scale, norm2(phi_ts) + norm2(grads));
        }
        double init_scale = 0.0;
        for (std::size_t sc = 0; sc < g.spatial_cell_count(); ++sc) {
            g.spatial_center(sc, xs);
            phi.value(0.0, xs, phi0s);
            init_scale = std::max(init_scale, norm2(phi0s));
        }

        // Oscillation transport and stress plus the concentration stress.
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
            double term = 0.0;
            if (!g.is_final_layer(c)) {
                phi.dt(t, x, phi_t);
                const auto bc = b.at(c);
                double dot = 0.0;
                for (std::size_t i = 0; i < d; ++i) {
                    dot += bc[i] * phi_t[i];
                }
                const double* M = mom2.data() + c * d * d;
                double contraction = 0.0;
                for (std::size_t i = 0; i < d * d; ++i) {
                    contraction += M[i] * grad[i];
                }
                term += vol * (dot + contraction);
            }
            const double* S = stress.data() + c * d * d;
            double sc = 0.0;
            for (std::size_t i = 0; i < d * d; ++i) {
                sc += S[i] * grad[i];
            }
            term += sc;
            return term;
        });
        // Initial-data boundary term at t = 0.
        const double initial = deterministic_sum(g.spatial_cell_count(), [&](std::size_t sc) {
            thread_local std::vector<double> x;
            thread_local std::vector<double> phi0;
            x.resize(d);
            phi0.resize(d);
            g.spatial_center(sc, x);
            phi.value(0.0, x, phi0);
            const auto v0 = data.v0().at(sc);
            double dot = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                dot += v0[i] * phi0[i];
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

WeakFormReport weak_form_report(const DiscreteYoungMeasure& Y, const IncompressibleData& data,
                                const TestFunctionDictionary& dict) {
    WeakFormReport rep;
    rep.mass = residual_mass(Y, dict);
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
                                        const IncompressibleData& data, double tol) {
    require_incompressible_shape(Y, "check_admissibility");
    require_matching_data(Y, data, "check_admissibility");
    const SpaceTimeGrid& g = Y.grid();
    const std::size_t d = static_cast<std::size_t>(g.d());
    const double volx = g.spatial_cell_volume();
    const double dt = g.dt();
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
        CompensatedSum kinetic;
        CompensatedSum lam;
        for (std::size_t i = 0; i < per_slice; ++i) {
            const CellMeasure& cm = Y.cell(base + i);
            double e = 0.0;
            for (const PhaseAtom& a : cm.atoms) {
                double n2 = 0.0;
                for (std::size_t j = 0; j < d; ++j) {
                    n2 += a.z[j] * a.z[j];
                }
                e += a.w * n2;
            }
            kinetic.add(0.5 * volx * e);
            lam.add(cm.lambda_mass);
        }
        // The slab's concentration density with respect to dt.
        const double slice_mass = lam.value() / dt;
        const double energy = kinetic.value() + 0.5 * slice_mass;
        rep.slice_lambda_mass[static_cast<std::size_t>(s)] = slice_mass;
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

} // namespace turbmax
