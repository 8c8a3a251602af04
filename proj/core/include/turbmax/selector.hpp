#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "turbmax/euler_compressible.hpp"
#include "turbmax/euler_incompressible.hpp"
#include "turbmax/functional.hpp"
#include "turbmax/measure.hpp"

namespace turbmax {

/// A point of the probability simplex.  Construction validates that the
/// entries sum to 1 within 1e-12 and are nonnegative up to -1e-15 (tiny
/// negative roundoff is clamped to zero).
class SimplexWeights {
public:
    explicit SimplexWeights(std::vector<double> theta);

    static SimplexWeights uniform(std::size_t n);
    static SimplexWeights vertex(std::size_t n, std::size_t i);

    std::size_t size() const noexcept { return theta_.size(); }
    double operator[](std::size_t i) const { return theta_[i]; }
    std::span<const double> theta() const noexcept { return theta_; }

private:
    std::vector<double> theta_;
};

enum class CandidateModel { Abstract, Incompressible, Compressible };

/// A finite family of measures on a shared grid with shared growth, the
/// vertices of the hull the selector searches.  The model-tagged constructors
/// verify every candidate against the weak form and the energy inequality
/// and refuse the set if any candidate fails.
class CandidateSet {
public:
    explicit CandidateSet(std::vector<DiscreteYoungMeasure> candidates);
    CandidateSet(std::vector<DiscreteYoungMeasure> candidates, const IncompressibleData& data,
                 const TestFunctionDictionary& dict, double residual_tol);
    CandidateSet(std::vector<DiscreteYoungMeasure> candidates, const CompressibleData& data,
                 const TestFunctionDictionary& dict, double residual_tol);
    /// Attach a model tag without running the checks.
    static CandidateSet unchecked(std::vector<DiscreteYoungMeasure> candidates,
                                  CandidateModel model);

    std::size_t size() const noexcept { return candidates_.size(); }
    const DiscreteYoungMeasure& at(std::size_t i) const { return candidates_.at(i); }
    std::span<const DiscreteYoungMeasure> candidates() const noexcept { return candidates_; }
    CandidateModel model() const noexcept { return model_; }

    DiscreteYoungMeasure combine(const SimplexWeights& theta) const;

private:
    std::vector<DiscreteYoungMeasure> candidates_;
    CandidateModel model_ = CandidateModel::Abstract;
};

/// The defect functional restricted to the hull, as a function of simplex
/// weights: a weighted sum of per-candidate pairing energies minus the
/// integrand evaluated on the mixed barycenter field.  Precomputes the
/// energies and barycenter fields once; evaluations are then linear in
/// cells * candidates.
class HullObjective {
public:
    HullObjective(const CandidateSet& candidates, const ConvexIntegrand& f);

    std::size_t n() const noexcept { return energies_.size(); }
    double value(std::span<const double> theta) const;
    /// Returns the value and fills the gradient.
    double value_and_gradient(std::span<const double> theta, std::span<double> grad) const;
    /// Writes the mixed barycenter field for the given weights.
    void mixed_barycenter(std::span<const double> theta, PhaseField& out) const;

    /// 1 + max |pairing energy|: the normalizer for gap tolerances.
    double scale() const noexcept { return scale_; }
    std::span<const double> pairing_energies() const noexcept { return energies_; }
    const ConvexIntegrand& integrand() const noexcept { return *f_; }
    const CandidateSet& candidates() const noexcept { return *candidates_; }

private:
    const CandidateSet* candidates_;
    const ConvexIntegrand* f_;
    std::vector<double> energies_;     // per candidate
    std::vector<double> barycenters_;  // candidate-major: n * cells * m
    std::size_t cells_;
    std::size_t m_;
    double vol_;
    double scale_;
};

struct ObjectiveValue {
    double value = 0.0;
    std::vector<double> gradient;
};

/// One-shot evaluation of the hull objective and its gradient.
ObjectiveValue objective(const SimplexWeights& theta, const CandidateSet& candidates,
                         const ConvexIntegrand& f);

struct MaximizeOptions {
    /// Absolute gap tolerance; nonpositive means 1e-10 * objective scale.
    double tol = 0.0;
    int max_iter = 10000;
    std::optional<std::vector<double>> start;
};

struct SelectionResult {
    std::vector<double> theta;
    double value = 0.0;
    /// Linearization gap at the final iterate: an upper bound for the
    /// distance to the hull maximum, hence a maximality certificate.
    double gap = 0.0;
    double tol = 0.0;
    int iterations = 0;
    bool converged = false;
    double total_energy = 0.0;
    int phase_dim = 0;
    std::vector<double> barycenter;  // interior cells x phase_dim
};

/// Frank-Wolfe ascent over the simplex with exact line search: closed form
/// for integrands that are quadratic along lines, and sign-bisection on the
/// directional derivative otherwise (the objective is concave along any
/// transfer segment, so the derivative's root is the maximizer).  Mass
/// moves from the worst supported vertex toward the best vertex, which keeps
/// iterates on the simplex exactly and avoids the classic zigzag stall near
/// optima supported on faces.  Terminates when the linearization gap falls
/// below tol; the gap is returned as the certificate.
SelectionResult maximize(const CandidateSet& candidates, const ConvexIntegrand& f,
                         const MaximizeOptions& opts = {});

struct BruteForceResult {
    std::vector<double> theta;
    double value = 0.0;
};

/// Exhaustive search over the uniform simplex lattice with the given
/// resolution.  Guards against more than 4 candidates.
BruteForceResult brute_force_simplex(const CandidateSet& candidates, const ConvexIntegrand& f,
                                     int resolution);

struct UniquenessReport {
    double max_barycenter_diff = 0.0;  // max over cells, Euclidean per cell
    double max_value_diff = 0.0;
    double max_energy_rel_diff = 0.0;
    double barycenter_tol = 0.0;
    double energy_rel_tol = 0.0;
    bool consistent = false;
};

/// Compares converged selection results pairwise: barycenter fields must
/// agree cell by cell and pairing energies in relative terms, as the
/// mean-value characterization of maximizers predicts.  Rejects inputs whose
/// gap exceeds their tolerance.
UniquenessReport uniqueness_diagnostic(std::span<const SelectionResult> results,
                                       double barycenter_tol = 1e-6,
                                       double energy_rel_tol = 1e-8);

} // namespace turbmax
