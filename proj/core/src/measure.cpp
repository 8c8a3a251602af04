#include "turbmax/measure.hpp"

#include <cmath>
#include <cstring>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "turbmax/summation.hpp"

namespace turbmax {

namespace {

constexpr double kWeightSumTol = 1e-12;
constexpr double kSurfaceTol = 1e-10;
constexpr double kVacuumGuard = 1e-14;

bool all_finite(std::span<const double> v) {
    for (const double x : v) {
        if (!std::isfinite(x)) {
            return false;
        }
    }
    return true;
}

[[noreturn]] void fail_cell(std::size_t cell, const std::string& what) {
    std::ostringstream os;
    os << "DiscreteYoungMeasure: cell " << cell << ": " << what;
    throw std::invalid_argument(os.str());
}

bool same_point(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        return false;
    }
    // Bitwise comparison: merging is an exact-dedup, not a numeric snap.
    return std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

void check_compatible(const DiscreteYoungMeasure& a, const DiscreteYoungMeasure& b,
                      const char* who) {
    if (a.grid() != b.grid()) {
        throw std::invalid_argument(std::string(who) + ": grids differ");
    }
    if (a.phase_dim() != b.phase_dim()) {
        throw std::invalid_argument(std::string(who) + ": phase dimensions differ");
    }
    if (!a.growth().compatible_with(b.growth())) {
        throw std::invalid_argument(std::string(who) + ": growth structures differ");
    }
}

} // namespace

DiscreteYoungMeasure::DiscreteYoungMeasure(SpaceTimeGrid grid, int phase_dim,
                                           GrowthStructure growth, std::vector<CellMeasure> cells)
    : grid_(grid), phase_dim_(phase_dim), growth_(growth), cells_(std::move(cells)),
      lambda_total_(0.0), final_layer_mass_(0.0) {
    if (phase_dim_ < 1) {
        throw std::invalid_argument("DiscreteYoungMeasure: phase_dim must be positive");
    }
    if (growth_.kind() == GrowthKind::Isentropic && phase_dim_ < 2) {
        throw std::invalid_argument(
            "DiscreteYoungMeasure: isentropic growth needs a density coordinate plus momentum");
    }
    if (cells_.size() != grid_.cell_count()) {
        std::ostringstream os;
        os << "DiscreteYoungMeasure: expected " << grid_.cell_count() << " cells, got "
           << cells_.size();
        throw std::invalid_argument(os.str());
    }

    const std::size_t m = static_cast<std::size_t>(phase_dim_);
    CompensatedSum lambda_acc;
    CompensatedSum boundary_acc;
    for (std::size_t c = 0; c < cells_.size(); ++c) {
        const CellMeasure& cm = cells_[c];
        const bool boundary = grid_.is_final_layer(c);

        if (boundary) {
            if (!cm.atoms.empty()) {
                fail_cell(c, "final-layer cells carry concentration only, found oscillation atoms");
            }
        } else {
            if (cm.atoms.empty()) {
                fail_cell(c, "interior cell has no oscillation atoms");
            }
            double wsum = 0.0;
            for (const PhaseAtom& a : cm.atoms) {
                if (a.z.size() != m) {
                    fail_cell(c, "atom has wrong phase dimension");
                }
                if (!all_finite(a.z) || !std::isfinite(a.w)) {
                    fail_cell(c, "atom with non-finite entries");
                }
                if (a.w < 0.0) {
                    fail_cell(c, "negative atom weight");
                }
                if (growth_.kind() == GrowthKind::Isentropic && a.z[0] <= kVacuumGuard) {
                    std::ostringstream os;
                    os << "density coordinate " << a.z[0] << " at or below the vacuum guard "
                       << kVacuumGuard;
                    fail_cell(c, os.str());
                }
                wsum += a.w;
            }
            if (std::abs(wsum - 1.0) > kWeightSumTol) {
                std::ostringstream os;
                os << "atom weights sum to " << wsum << ", expected 1";
                fail_cell(c, os.str());
            }
        }

        if (!std::isfinite(cm.lambda_mass) || cm.lambda_mass < 0.0) {
            fail_cell(c, "concentration mass must be finite and nonnegative");
        }
        if (cm.lambda_mass == 0.0) {
            if (!cm.angle_atoms.empty()) {
                fail_cell(c, "direction atoms present but concentration mass is zero");
            }
        } else {
            if (cm.angle_atoms.empty()) {
                fail_cell(c, "positive concentration mass needs direction atoms");
            }
            double wsum = 0.0;
            for (const AngleAtom& a : cm.angle_atoms) {
                if (a.theta.size() != m) {
                    fail_cell(c, "direction atom has wrong phase dimension");
                }
                if (!all_finite(a.theta) || !std::isfinite(a.w)) {
                    fail_cell(c, "direction atom with non-finite entries");
                }
                if (a.w < 0.0) {
                    fail_cell(c, "negative direction weight");
                }
                const double res = growth_.surface_residual(a.theta);
                if (res > kSurfaceTol) {
                    std::ostringstream os;
                    os << "direction atom off the recession surface (residual " << res << ")";
                    fail_cell(c, os.str());
                }
                wsum += a.w;
            }
            if (std::abs(wsum - 1.0) > kWeightSumTol) {
                std::ostringstream os;
                os << "direction weights sum to " << wsum << ", expected 1";
                fail_cell(c, os.str());
            }
        }

        lambda_acc.add(cm.lambda_mass);
        if (boundary) {
            boundary_acc.add(cm.lambda_mass);
        }
    }
    lambda_total_ = lambda_acc.value();
    final_layer_mass_ = boundary_acc.value();
}

DiscreteYoungMeasure young_of_function(
    const SpaceTimeGrid& grid, int phase_dim, const GrowthStructure& growth,
    const std::function<void(double, std::span<const double>, std::span<double>)>& field) {
    std::vector<CellMeasure> cells(grid.cell_count());
    std::vector<double> x(static_cast<std::size_t>(grid.d()));
    for (std::size_t c = 0; c < grid.interior_cell_count(); ++c) {
        double t = 0.0;
        grid.cell_center(c, t, x);
        PhaseAtom atom;
        atom.z.assign(static_cast<std::size_t>(phase_dim), 0.0);
        atom.w = 1.0;
        field(t, x, atom.z);
        if (!all_finite(atom.z)) {
            std::ostringstream os;
            os << "young_of_function: field value at cell " << c << " is not finite";
            throw std::invalid_argument(os.str());
        }
        cells[c].atoms.push_back(std::move(atom));
    }
    return DiscreteYoungMeasure(grid, phase_dim, growth, std::move(cells));
}

PhaseField barycenter(const DiscreteYoungMeasure& Y) {
    PhaseField out(Y.grid(), Y.phase_dim());
    const std::size_t m = static_cast<std::size_t>(Y.phase_dim());
    for (std::size_t c = 0; c < Y.grid().interior_cell_count(); ++c) {
        auto b = out.at(c);
        for (const PhaseAtom& a : Y.cell(c).atoms) {
            for (std::size_t i = 0; i < m; ++i) {
                b[i] += a.w * a.z[i];
            }
        }
    }
    return out;
}

double pairing(const DiscreteYoungMeasure& Y, const ConvexIntegrand& f, const SpaceTimeFn& phi) {
    if (!f.growth().compatible_with(Y.growth())) {
        throw std::invalid_argument("pairing: integrand growth does not match the measure");
    }
    const SpaceTimeGrid& g = Y.grid();
    const double vol = g.cell_volume();
    const std::size_t n = g.cell_count();
    thread_local std::vector<double> xbuf;

    return deterministic_sum(n, [&](std::size_t c) {
        const CellMeasure& cm = Y.cell(c);
        if (cm.atoms.empty() && cm.lambda_mass == 0.0) {
            return 0.0;
        }
        xbuf.resize(static_cast<std::size_t>(g.d()));
        double t = 0.0;
        g.cell_center(c, t, xbuf);
        const double p = phi(t, xbuf);
        double term = 0.0;
        if (!g.is_final_layer(c)) {
            double osc = 0.0;
            for (const PhaseAtom& a : cm.atoms) {
                osc += a.w * f.eval(a.z);
            }
            term += vol * p * osc;
        }
        if (cm.lambda_mass > 0.0) {
            double conc = 0.0;
            for (const AngleAtom& a : cm.angle_atoms) {
                conc += a.w * f.recession(a.theta);
            }
            term += p * conc * cm.lambda_mass;
        }
        if (!std::isfinite(term)) {
            std::ostringstream os;
            os << "pairing: non-finite contribution at cell " << c;
            throw std::domain_error(os.str());
        }
        return term;
    });
}

double pairing(const DiscreteYoungMeasure& Y, const ConvexIntegrand& f) {
    return pairing(Y, f, [](double, std::span<const double>) { return 1.0; });
}

namespace {

// Appends src's atoms scaled by factor, merging into dst on exact phase-point
// equality.  factor == 0 contributes nothing.
void merge_scaled_atoms(std::vector<PhaseAtom>& dst, const std::vector<PhaseAtom>& src,
                        double factor) {
    if (factor == 0.0) {
        return;
    }
    for (const PhaseAtom& a : src) {
        const double w = factor * a.w;
        bool merged = false;
        for (PhaseAtom& existing : dst) {
            if (same_point(existing.z, a.z)) {
                existing.w += w;
                merged = true;
                break;
            }
        }
        if (!merged) {
            dst.push_back(PhaseAtom{a.z, w});
        }
    }
}

void merge_scaled_angles(std::vector<AngleAtom>& dst, const std::vector<AngleAtom>& src,
                         double mass_share) {
    if (mass_share == 0.0) {
        return;
    }
    for (const AngleAtom& a : src) {
        const double w = mass_share * a.w;
        bool merged = false;
        for (AngleAtom& existing : dst) {
            if (same_point(existing.theta, a.theta)) {
                existing.w += w;
                merged = true;
                break;
            }
        }
        if (!merged) {
            dst.push_back(AngleAtom{a.theta, w});
        }
    }
}

DiscreteYoungMeasure combine_impl(std::span<const DiscreteYoungMeasure* const> candidates,
                                  std::span<const double> theta, const char* who) {
    if (candidates.empty()) {
        throw std::invalid_argument(std::string(who) + ": empty candidate list");
    }
    if (candidates.size() != theta.size()) {
        throw std::invalid_argument(std::string(who) + ": theta size does not match candidates");
    }
    double tsum = 0.0;
    for (const double t : theta) {
        if (t < -1e-15) {
            throw std::invalid_argument(std::string(who) + ": negative simplex weight");
        }
        tsum += t;
    }
    if (std::abs(tsum - 1.0) > 1e-12) {
        std::ostringstream os;
        os << who << ": weights sum to " << tsum << ", expected 1";
        throw std::invalid_argument(os.str());
    }
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        check_compatible(*candidates[0], *candidates[i], who);
    }

    const SpaceTimeGrid& grid = candidates[0]->grid();
    std::vector<CellMeasure> cells(grid.cell_count());
    for (std::size_t c = 0; c < cells.size(); ++c) {
        CellMeasure& out = cells[c];
        double lambda = 0.0;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            const double t = theta[i] < 0.0 ? 0.0 : theta[i];
            if (t == 0.0) {
                continue;
            }
            const CellMeasure& cm = candidates[i]->cell(c);
            merge_scaled_atoms(out.atoms, cm.atoms, t);
            lambda += t * cm.lambda_mass;
        }
        out.lambda_mass = lambda;
        if (lambda > 0.0) {
            // Direction weights are the discrete density of each parent's
            // contribution with respect to the combined cell mass.
            for (std::size_t i = 0; i < candidates.size(); ++i) {
                const double t = theta[i] < 0.0 ? 0.0 : theta[i];
                if (t == 0.0) {
                    continue;
                }
                const CellMeasure& cm = candidates[i]->cell(c);
                if (cm.lambda_mass > 0.0) {
                    merge_scaled_angles(out.angle_atoms, cm.angle_atoms,
                                        t * cm.lambda_mass / lambda);
                }
            }
        }
    }
    return DiscreteYoungMeasure(grid, candidates[0]->phase_dim(), candidates[0]->growth(),
                                std::move(cells));
}

} // namespace

DiscreteYoungMeasure convex_combine(const DiscreteYoungMeasure& Y1, const DiscreteYoungMeasure& Y2,
                                     double tau) {
    if (!(tau >= 0.0 && tau <= 1.0)) {
        throw std::invalid_argument("convex_combine: tau must lie in [0, 1]");
    }
    const DiscreteYoungMeasure* ys[2] = {&Y1, &Y2};
    const double th[2] = {tau, 1.0 - tau};
    return combine_impl(std::span<const DiscreteYoungMeasure* const>(ys, 2),
                        std::span<const double>(th, 2), "convex_combine");
}

DiscreteYoungMeasure convex_combine_n(std::span<const DiscreteYoungMeasure> candidates,
                                       std::span<const double> theta) {
    std::vector<const DiscreteYoungMeasure*> ptrs;
    ptrs.reserve(candidates.size());
    for (const DiscreteYoungMeasure& y : candidates) {
        ptrs.push_back(&y);
    }
    return combine_impl(ptrs, theta, "convex_combine_n");
}

double measure_scale(const DiscreteYoungMeasure& Y) {
    const SpaceTimeGrid& g = Y.grid();
    const double vol = g.cell_volume();
    const double mass = deterministic_sum(g.interior_cell_count(), [&](std::size_t c) {
        double s = 0.0;
        for (const PhaseAtom& a : Y.cell(c).atoms) {
            double n2 = 0.0;
            for (const double z : a.z) {
                n2 += z * z;
            }
            s += a.w * std::sqrt(n2);
        }
        return vol * s;
    });
    return 1.0 + mass + Y.lambda_total();
}

} // namespace turbmax
