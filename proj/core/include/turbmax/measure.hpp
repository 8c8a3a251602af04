#pragma once

#include <functional>
#include <span>
#include <vector>

#include "turbmax/grid.hpp"
#include "turbmax/growth.hpp"
#include "turbmax/integrand.hpp"

namespace turbmax {

/// One oscillation atom: a point of phase space with a probability weight.
struct PhaseAtom {
    std::vector<double> z;
    double w = 0.0;
};

/// One concentration-direction atom: a point on the recession surface with a
/// probability weight (relative to the cell's concentration mass).
struct AngleAtom {
    std::vector<double> theta;
    double w = 0.0;
};

/// Per-cell data of a discrete generalized Young measure.  Interior cells
/// carry a probability mixture of phase atoms plus an optional concentration
/// mass with its direction mixture; final-layer cells carry concentration
/// only.  angle_atoms is nonempty exactly when lambda_mass > 0.
struct CellMeasure {
    std::vector<PhaseAtom> atoms;
    double lambda_mass = 0.0;
    std::vector<AngleAtom> angle_atoms;
};

/// A generalized Young measure with finite atomic data on a space-time grid:
/// per interior cell a probability mixture on phase space, plus a nonnegative
/// concentration measure (cell masses) with per-cell direction mixtures on
/// the growth structure's recession surface.  Immutable after construction;
/// all algebra returns new measures.
class DiscreteYoungMeasure {
public:
    /// Validates everything: atom weights sum to 1 per interior cell (1e-12),
    /// final-layer cells carry no atoms, angle weights sum to 1 where
    /// lambda_mass > 0 and are absent where it is 0, angle atoms sit on the
    /// recession surface (residual <= 1e-10), all numbers finite, and for
    /// isentropic growth every atom's density coordinate exceeds the vacuum
    /// guard 1e-14.
    DiscreteYoungMeasure(SpaceTimeGrid grid, int phase_dim, GrowthStructure growth,
                         std::vector<CellMeasure> cells);

    const SpaceTimeGrid& grid() const noexcept { return grid_; }
    int phase_dim() const noexcept { return phase_dim_; }
    const GrowthStructure& growth() const noexcept { return growth_; }

    const CellMeasure& cell(std::size_t i) const { return cells_.at(i); }
    std::span<const CellMeasure> cells() const noexcept { return cells_; }

    /// Total concentration mass over all cells, final layer included.
    double lambda_total() const noexcept { return lambda_total_; }
    /// Concentration mass sitting on the t = T sheet (0 when the grid has no
    /// final layer).
    double final_layer_mass() const noexcept { return final_layer_mass_; }

private:
    SpaceTimeGrid grid_;
    int phase_dim_;
    GrowthStructure growth_;
    std::vector<CellMeasure> cells_;
    double lambda_total_;
    double final_layer_mass_;
};

/// Scalar test function on the closed space-time cylinder.
using SpaceTimeFn = std::function<double(double, std::span<const double>)>;

/// The measure of a classical field: one Dirac atom per interior cell at the
/// field value sampled at the cell midpoint, zero concentration.
DiscreteYoungMeasure young_of_function(
    const SpaceTimeGrid& grid, int phase_dim, const GrowthStructure& growth,
    const std::function<void(double, std::span<const double>, std::span<double>)>& field);

/// Per-cell first moment of the oscillation part.
PhaseField barycenter(const DiscreteYoungMeasure& Y);

/// The duality pairing with an integrand and a scalar test function:
///   sum over interior cells of vol * phi(center) * <nu_c, f>
/// + sum over all cells of phi(center) * <nu_c^inf, f_rec> * lambda_c.
/// Reduction order is fixed and compensated, so the result is bit-stable.
double pairing(const DiscreteYoungMeasure& Y, const ConvexIntegrand& f, const SpaceTimeFn& phi);

/// Pairing against phi identically 1.
double pairing(const DiscreteYoungMeasure& Y, const ConvexIntegrand& f);

/// The convex combination tau * Y1 + (1 - tau) * Y2 of measures on the same
/// grid with the same growth: atom lists merge with scaled weights (only
/// bitwise-equal phase points collapse), concentration masses interpolate,
/// and direction weights are reweighted by their parent's share of the
/// combined cell mass.
DiscreteYoungMeasure convex_combine(const DiscreteYoungMeasure& Y1, const DiscreteYoungMeasure& Y2,
                                     double tau);

/// N-ary convex combination with simplex weights; candidates with zero weight
/// drop out exactly.  Pairings of the result are the theta-weighted sums of
/// the candidates' pairings up to roundoff.
DiscreteYoungMeasure convex_combine_n(std::span<const DiscreteYoungMeasure> candidates,
                                       std::span<const double> theta);

/// 1 + integral of <nu, |z|> + total concentration mass: the normalizer used
/// when residuals and optimality gaps are reported relative to measure size.
double measure_scale(const DiscreteYoungMeasure& Y);

} // namespace turbmax
