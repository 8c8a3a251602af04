#include "turbmax/selector.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "turbmax/summation.hpp"

namespace turbmax {

namespace {

void require_nonempty(std::size_t n, const char* who) {
    if (n == 0) {
        throw std::invalid_argument(std::string(who) + ": empty candidate list");
    }
}

std::string join_indices(const std::vector<std::size_t>& idx) {
    std::ostringstream os;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        os << (i == 0 ? "" : ", ") << idx[i];
    }
    return os.str();
}

} // namespace

SimplexWeights::SimplexWeights(std::vector<double> theta) : theta_(std::move(theta)) {
    if (theta_.empty()) {
        throw std::invalid_argument("SimplexWeights: empty weight vector");
    }
    double sum = 0.0;
    for (double& t : theta_) {
        if (!std::isfinite(t)) {
            throw std::invalid_argument("SimplexWeights: non-finite entry");
        }
        if (t < 0.0) {
            if (t < -1e-15) {
                std::ostringstream os;
                os << "SimplexWeights: negative entry " << t;
                throw std::invalid_argument(os.str());
            }
            t = 0.0;
        }
        sum += t;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        std::ostringstream os;
        os << "SimplexWeights: entries sum to " << sum << ", expected 1";
        throw std::invalid_argument(os.str());
    }
}

SimplexWeights SimplexWeights::uniform(std::size_t n) {
    require_nonempty(n, "SimplexWeights::uniform");
    std::vector<double> t(n, 1.0 / static_cast<double>(n));
    // Absorb the rounding of 1/n into the last entry so the sum is exact.
    double partial = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        partial += t[i];
    }
    t[n - 1] = 1.0 - partial;
    return SimplexWeights(std::move(t));
}

SimplexWeights SimplexWeights::vertex(std::size_t n, std::size_t i) {
    require_nonempty(n, "SimplexWeights::vertex");
    if (i >= n) {
        throw std::invalid_argument("SimplexWeights::vertex: index out of range");
    }
    std::vector<double> t(n, 0.0);
    t[i] = 1.0;
    return SimplexWeights(std::move(t));
}

CandidateSet::CandidateSet(std::vector<DiscreteYoungMeasure> candidates)
    : candidates_(std::move(candidates)) {
    require_nonempty(candidates_.size(), "CandidateSet");
    for (std::size_t i = 1; i < candidates_.size(); ++i) {
        if (candidates_[i].grid() != candidates_[0].grid() ||
            candidates_[i].phase_dim() != candidates_[0].phase_dim() ||
            !candidates_[i].growth().compatible_with(candidates_[0].growth())) {
            std::ostringstream os;
            os << "CandidateSet: candidate " << i << " lives on a different grid, phase "
               << "dimension, or growth structure than candidate 0";
            throw std::invalid_argument(os.str());
        }
    }
}

CandidateSet::CandidateSet(std::vector<DiscreteYoungMeasure> candidates,
                           const IncompressibleData& data, const TestFunctionDictionary& dict,
                           double residual_tol)
    : CandidateSet(std::move(candidates)) {
    model_ = CandidateModel::Incompressible;
    std::vector<std::size_t> failing;
    for (std::size_t i = 0; i < candidates_.size(); ++i) {
        const WeakFormReport wf = weak_form_report(candidates_[i], data, dict);
        const AdmissibilityReport adm = check_admissibility(candidates_[i], data, residual_tol);
        if (wf.max_mass > residual_tol || wf.max_momentum > residual_tol || !adm.admissible) {
            failing.push_back(i);
        }
    }
    if (!failing.empty()) {
        throw std::invalid_argument(
            "CandidateSet: candidates failing the incompressible checks at tolerance " +
            std::to_string(residual_tol) + ": " + join_indices(failing));
    }
}

CandidateSet::CandidateSet(std::vector<DiscreteYoungMeasure> candidates,
                           const CompressibleData& data, const TestFunctionDictionary& dict,
                           double residual_tol)
    : CandidateSet(std::move(candidates)) {
    model_ = CandidateModel::Compressible;
    std::vector<std::size_t> failing;
    for (std::size_t i = 0; i < candidates_.size(); ++i) {
        const WeakFormReport wf = weak_form_report(candidates_[i], data, dict);
        const AdmissibilityReport adm = check_admissibility(candidates_[i], data, residual_tol);
        if (wf.max_mass > residual_tol || wf.max_momentum > residual_tol || !adm.admissible) {
            failing.push_back(i);
        }
    }
    if (!failing.empty()) {
        throw std::invalid_argument(
            "CandidateSet: candidates failing the compressible checks at tolerance " +
            std::to_string(residual_tol) + ": " + join_indices(failing));
    }
}

CandidateSet CandidateSet::unchecked(std::vector<DiscreteYoungMeasure> candidates,
                                     CandidateModel model) {
    CandidateSet s(std::move(candidates));
    s.model_ = model;
    return s;
}

DiscreteYoungMeasure CandidateSet::combine(const SimplexWeights& theta) const {
    return convex_combine_n(candidates_, theta.theta());
}

HullObjective::HullObjective(const CandidateSet& candidates, const ConvexIntegrand& f)
    : candidates_(&candidates), f_(&f) {
    const std::size_t n = candidates.size();
    const DiscreteYoungMeasure& first = candidates.at(0);
    if (!f.growth().compatible_with(first.growth())) {
        throw std::invalid_argument("HullObjective: integrand growth does not match candidates");
    }
    cells_ = first.grid().interior_cell_count();
    m_ = static_cast<std::size_t>(first.phase_dim());
    vol_ = first.grid().cell_volume();

    energies_.resize(n);
    barycenters_.resize(n * cells_ * m_);
    for (std::size_t i = 0; i < n; ++i) {
        energies_[i] = total_energy(candidates.at(i), f);
        const PhaseField b = barycenter(candidates.at(i));
        std::copy(b.raw().begin(), b.raw().end(), barycenters_.begin() + i * cells_ * m_);
    }
    scale_ = 1.0;
    for (const double c : energies_) {
        scale_ = std::max(scale_, 1.0 + std::abs(c));
    }
}

double HullObjective::value(std::span<const double> theta) const {
    const std::size_t n = energies_.size();
    if (theta.size() != n) {
        throw std::invalid_argument("HullObjective::value: theta size mismatch");
    }
    CompensatedSum linear;
    for (std::size_t i = 0; i < n; ++i) {
        linear.add(theta[i] * energies_[i]);
    }
    const double mixed = deterministic_sum(cells_, [&](std::size_t c) {
        thread_local std::vector<double> z;
        z.assign(m_, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = theta[i];
            if (t == 0.0) {
                continue;
            }
            const double* b = barycenters_.data() + (i * cells_ + c) * m_;
            for (std::size_t j = 0; j < m_; ++j) {
                z[j] += t * b[j];
            }
        }
        return vol_ * f_->eval(z);
    });
    return linear.value() - mixed;
}

double HullObjective::value_and_gradient(std::span<const double> theta,
                                         std::span<double> grad) const {
    const std::size_t n = energies_.size();
    if (theta.size() != n || grad.size() != n) {
        throw std::invalid_argument("HullObjective::value_and_gradient: size mismatch");
    }
    std::vector<CompensatedSum> moment(n);
    CompensatedSum mixed;
    std::vector<double> z(m_), df(m_);
    for (std::size_t c = 0; c < cells_; ++c) {
        std::fill(z.begin(), z.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = theta[i];
            if (t == 0.0) {
                continue;
            }
            const double* b = barycenters_.data() + (i * cells_ + c) * m_;
            for (std::size_t j = 0; j < m_; ++j) {
                z[j] += t * b[j];
            }
        }
        mixed.add(vol_ * f_->eval(z));
        f_->gradient(z, df);
        for (std::size_t i = 0; i < n; ++i) {
            const double* b = barycenters_.data() + (i * cells_ + c) * m_;
            double dot = 0.0;
            for (std::size_t j = 0; j < m_; ++j) {
                dot += df[j] * b[j];
            }
            moment[i].add(vol_ * dot);
        }
    }
    CompensatedSum linear;
    for (std::size_t i = 0; i < n; ++i) {
        linear.add(theta[i] * energies_[i]);
        grad[i] = energies_[i] - moment[i].value();
    }
    return linear.value() - mixed.value();
}

void HullObjective::mixed_barycenter(std::span<const double> theta, PhaseField& out) const {
    const std::size_t n = energies_.size();
    if (out.cell_count() != cells_ || static_cast<std::size_t>(out.value_dim()) != m_) {
        throw std::invalid_argument("HullObjective::mixed_barycenter: field shape mismatch");
    }
    auto raw = out.raw();
    std::fill(raw.begin(), raw.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = theta[i];
        if (t == 0.0) {
            continue;
        }
        const double* b = barycenters_.data() + i * cells_ * m_;
        for (std::size_t j = 0; j < cells_ * m_; ++j) {
            raw[j] += t * b[j];
        }
    }
}

ObjectiveValue objective(const SimplexWeights& theta, const CandidateSet& candidates,
                         const ConvexIntegrand& f) {
    if (theta.size() != candidates.size()) {
        throw std::invalid_argument("objective: theta size does not match candidate count");
    }
    const HullObjective obj(candidates, f);
    ObjectiveValue out;
    out.gradient.resize(theta.size());
    out.value = obj.value_and_gradient(theta.theta(), out.gradient);
    return out;
}

namespace {

// Exact maximizer of the quadratic through (0, h0), (gmax/2, hh), (gmax, hm)
// on [0, gmax].
double quadratic_line_max(double h0, double hh, double hm, double gmax) {
    const double curv = 2.0 * (h0 - 2.0 * hh + hm);  // c * gmax^2
    const double slope = 4.0 * hh - 3.0 * h0 - hm;   // b * gmax
    if (curv < 0.0) {
        const double s = std::clamp(-slope / (2.0 * curv), 0.0, 1.0);
        return s * gmax;
    }
    return hm > h0 ? gmax : 0.0;
}

// The objective is concave along the transfer segment, so its directional
// derivative is non-increasing and the maximizer is the derivative's root (or
// an endpoint). Bisecting on the derivative's sign resolves the step to
// floating-point precision; comparing objective values cannot, because the
// value improvement near the optimum is quadratically small in the gap.
double bisect_line_max(const std::function<double(double)>& slope, double gmax) {
    if (slope(0.0) <= 0.0) {
        return 0.0;
    }
    if (slope(gmax) >= 0.0) {
        return gmax;
    }
    double lo = 0.0;
    double hi = gmax;
    for (int k = 0; k < 200 && hi - lo > 0.0; ++k) {
        const double mid = lo + (hi - lo) / 2.0;
        if (slope(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo + (hi - lo) / 2.0;
}

} // namespace

SelectionResult maximize(const CandidateSet& candidates, const ConvexIntegrand& f,
                         const MaximizeOptions& opts) {
    const HullObjective obj(candidates, f);
    const std::size_t n = obj.n();

    std::vector<double> theta;
    if (opts.start.has_value()) {
        const SimplexWeights s(*opts.start);
        theta.assign(s.theta().begin(), s.theta().end());
    } else {
        const SimplexWeights u = SimplexWeights::uniform(n);
        theta.assign(u.theta().begin(), u.theta().end());
    }
    if (theta.size() != n) {
        throw std::invalid_argument("maximize: start weights size does not match candidates");
    }

    const double tol = opts.tol > 0.0 ? opts.tol : 1e-10 * obj.scale();
    if (opts.max_iter < 1) {
        throw std::invalid_argument("maximize: max_iter must be positive");
    }

    std::vector<double> grad(n);
    std::vector<double> trial(n);
    std::vector<double> trial_grad(n);
    double value = obj.value_and_gradient(theta, grad);
    double gap = 0.0;
    int iter = 0;
    bool converged = false;

    for (; iter < opts.max_iter; ++iter) {
        // Best vertex: ties break toward the lowest index.
        std::size_t j_plus = 0;
        for (std::size_t i = 1; i < n; ++i) {
            if (grad[i] > grad[j_plus]) {
                j_plus = i;
            }
        }
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            dot += grad[i] * theta[i];
        }
        gap = grad[j_plus] - dot;
        if (gap <= tol) {
            converged = true;
            break;
        }
        // Worst supported vertex donates its mass.
        std::size_t j_minus = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (theta[i] > 0.0 && (j_minus == n || grad[i] < grad[j_minus])) {
                j_minus = i;
            }
        }
        if (j_minus == n || j_minus == j_plus) {
            break;  // no transferable mass: the gap cannot be reduced further
        }
        const double gmax = theta[j_minus];
        const auto eval_step = [&](double s) {
            std::copy(theta.begin(), theta.end(), trial.begin());
            trial[j_plus] += s;
            trial[j_minus] = gmax - s;
            return obj.value(trial);
        };
        double step;
        if (f.quadratic_along_lines()) {
            step = quadratic_line_max(value, eval_step(gmax / 2.0), eval_step(gmax), gmax);
        } else {
            const auto slope_at = [&](double s) {
                std::copy(theta.begin(), theta.end(), trial.begin());
                trial[j_plus] += s;
                trial[j_minus] = gmax - s;
                obj.value_and_gradient(trial, trial_grad);
                return trial_grad[j_plus] - trial_grad[j_minus];
            };
            step = bisect_line_max(slope_at, gmax);
        }
        if (step <= 0.0) {
            break;  // line search cannot make progress at this scale
        }
        theta[j_plus] += step;
        theta[j_minus] = gmax - step;
        if (theta[j_minus] < 0.0) {
            theta[j_minus] = 0.0;
        }
        value = obj.value_and_gradient(theta, grad);
    }

    // Final gap at the returned iterate.
    {
        std::size_t j_plus = 0;
        for (std::size_t i = 1; i < n; ++i) {
            if (grad[i] > grad[j_plus]) {
                j_plus = i;
            }
        }
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            dot += grad[i] * theta[i];
        }
        gap = grad[j_plus] - dot;
        converged = gap <= tol;
    }

    SelectionResult res;
    res.theta = theta;
    res.value = value;
    res.gap = gap;
    res.tol = tol;
    res.iterations = iter;
    res.converged = converged;
    CompensatedSum energy;
    for (std::size_t i = 0; i < n; ++i) {
        energy.add(theta[i] * obj.pairing_energies()[i]);
    }
    res.total_energy = energy.value();
    res.phase_dim = candidates.at(0).phase_dim();
    PhaseField bary(candidates.at(0).grid(), res.phase_dim);
    obj.mixed_barycenter(theta, bary);
    res.barycenter.assign(bary.raw().begin(), bary.raw().end());
    return res;
}

BruteForceResult brute_force_simplex(const CandidateSet& candidates, const ConvexIntegrand& f,
                                     int resolution) {
    const std::size_t n = candidates.size();
    if (n > 4) {
        throw std::invalid_argument("brute_force_simplex: supports at most 4 candidates");
    }
    if (resolution < 1) {
        throw std::invalid_argument("brute_force_simplex: resolution must be positive");
    }
    const HullObjective obj(candidates, f);
    const double res = static_cast<double>(resolution);

    BruteForceResult best;
    best.theta.assign(n, 0.0);
    bool first = true;
    std::vector<int> counts(n, 0);
    std::vector<double> theta(n, 0.0);

    // Enumerate compositions of `resolution` into n nonnegative parts.
    const std::function<void(std::size_t, int)> recurse = [&](std::size_t slot, int remaining) {
        if (slot + 1 == n) {
            counts[slot] = remaining;
            for (std::size_t i = 0; i < n; ++i) {
                theta[i] = static_cast<double>(counts[i]) / res;
            }
            // Absorb rounding into the largest entry so the sum is exact.
            double sum = 0.0;
            std::size_t imax = 0;
            for (std::size_t i = 0; i < n; ++i) {
                sum += theta[i];
                if (counts[i] > counts[imax]) {
                    imax = i;
                }
            }
            theta[imax] += 1.0 - sum;
            const double v = obj.value(theta);
            if (first || v > best.value) {
                first = false;
                best.value = v;
                best.theta = theta;
            }
            return;
        }
        for (int c = remaining; c >= 0; --c) {
            counts[slot] = c;
            recurse(slot + 1, remaining - c);
        }
    };
    recurse(0, resolution);
    return best;
}

UniquenessReport uniqueness_diagnostic(std::span<const SelectionResult> results,
                                       double barycenter_tol, double energy_rel_tol) {
    if (results.size() < 2) {
        throw std::invalid_argument("uniqueness_diagnostic: need at least two results");
    }
    const std::size_t cells_m = results[0].barycenter.size();
    const std::size_t m = static_cast<std::size_t>(results[0].phase_dim);
    if (m == 0 || cells_m % m != 0) {
        throw std::invalid_argument("uniqueness_diagnostic: malformed barycenter field");
    }
    for (const SelectionResult& r : results) {
        if (!r.converged || r.gap > r.tol) {
            throw std::invalid_argument(
                "uniqueness_diagnostic: results must be converged within their gap tolerance");
        }
        if (r.barycenter.size() != cells_m || static_cast<std::size_t>(r.phase_dim) != m) {
            throw std::invalid_argument("uniqueness_diagnostic: barycenter shapes differ");
        }
    }

    UniquenessReport rep;
    rep.barycenter_tol = barycenter_tol;
    rep.energy_rel_tol = energy_rel_tol;
    for (std::size_t a = 0; a < results.size(); ++a) {
        for (std::size_t b = a + 1; b < results.size(); ++b) {
            double max_cell = 0.0;
            for (std::size_t cell = 0; cell < cells_m / m; ++cell) {
                double d2 = 0.0;
                for (std::size_t j = 0; j < m; ++j) {
                    const double diff = results[a].barycenter[cell * m + j] -
                                        results[b].barycenter[cell * m + j];
                    d2 += diff * diff;
                }
                max_cell = std::max(max_cell, std::sqrt(d2));
            }
            rep.max_barycenter_diff = std::max(rep.max_barycenter_diff, max_cell);
            rep.max_value_diff =
                std::max(rep.max_value_diff, std::abs(results[a].value - results[b].value));
            const double denom =
                std::max({1.0, std::abs(results[a].total_energy), std::abs(results[b].total_energy)});
            rep.max_energy_rel_diff =
                std::max(rep.max_energy_rel_diff,
                         std::abs(results[a].total_energy - results[b].total_energy) / denom);
        }
    }
    rep.consistent = rep.max_barycenter_diff <= barycenter_tol &&
                     rep.max_energy_rel_diff <= energy_rel_tol;
    return rep;
}

} // namespace turbmax
