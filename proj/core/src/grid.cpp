#include "turbmax/grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace turbmax {

namespace {

std::size_t pow_size(int base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) {
        r *= static_cast<std::size_t>(base);
    }
    return r;
}

} // namespace

SpaceTimeGrid::SpaceTimeGrid(double T, int d, int nt, int nx, bool final_layer)
    : T_(T), d_(d), nt_(nt), nx_(nx), final_layer_(final_layer) {
    if (!(T > 0.0) || !std::isfinite(T)) {
        throw std::invalid_argument("SpaceTimeGrid: T must be finite and positive");
    }
    if (d < 1 || d > 6) {
        throw std::invalid_argument("SpaceTimeGrid: spatial dimension d must be in [1, 6]");
    }
    if (nt < 1 || nx < 1) {
        throw std::invalid_argument("SpaceTimeGrid: nt and nx must be at least 1");
    }
    spatial_cells_ = pow_size(nx, d);
    spatial_volume_ = std::pow(2.0 * std::numbers::pi / nx, d);
    cell_volume_ = (T_ / nt_) * spatial_volume_;
}

double SpaceTimeGrid::dx() const noexcept { return 2.0 * std::numbers::pi / nx_; }

void SpaceTimeGrid::cell_center(std::size_t cell, double& t_out, std::span<double> x) const {
    if (cell >= cell_count()) {
        throw std::out_of_range("SpaceTimeGrid::cell_center: cell index out of range");
    }
    if (is_final_layer(cell)) {
        t_out = T_;
    } else {
        t_out = (static_cast<double>(time_index(cell)) + 0.5) * dt();
    }
    spatial_center(spatial_index(cell), x);
}

void SpaceTimeGrid::spatial_center(std::size_t spatial_cell, std::span<double> x) const {
    if (spatial_cell >= spatial_cells_) {
        throw std::out_of_range("SpaceTimeGrid::spatial_center: cell index out of range");
    }
    if (x.size() != static_cast<std::size_t>(d_)) {
        throw std::invalid_argument("SpaceTimeGrid::spatial_center: output span has wrong size");
    }
    const double h = dx();
    std::size_t rest = spatial_cell;
    // Row-major: the last axis varies fastest.
    for (int axis = d_ - 1; axis >= 0; --axis) {
        const std::size_t i = rest % static_cast<std::size_t>(nx_);
        rest /= static_cast<std::size_t>(nx_);
        x[static_cast<std::size_t>(axis)] = (static_cast<double>(i) + 0.5) * h;
    }
}

bool SpaceTimeGrid::operator==(const SpaceTimeGrid& other) const noexcept {
    return T_ == other.T_ && d_ == other.d_ && nt_ == other.nt_ && nx_ == other.nx_ &&
           final_layer_ == other.final_layer_;
}

SpatialField::SpatialField(int d, int nx, int value_dim)
    : d_(d), nx_(nx), value_dim_(value_dim) {
    if (d < 1 || nx < 1 || value_dim < 1) {
        throw std::invalid_argument("SpatialField: d, nx, value_dim must be positive");
    }
    cells_ = pow_size(nx, d);
    values_.assign(cells_ * static_cast<std::size_t>(value_dim_), 0.0);
}

SpatialField::SpatialField(int d, int nx, int value_dim, std::vector<double> values)
    : SpatialField(d, nx, value_dim) {
    if (values.size() != values_.size()) {
        std::ostringstream os;
        os << "SpatialField: expected " << values_.size() << " values, got " << values.size();
        throw std::invalid_argument(os.str());
    }
    values_ = std::move(values);
}

std::span<double> SpatialField::at(std::size_t cell) {
    return {values_.data() + cell * static_cast<std::size_t>(value_dim_),
            static_cast<std::size_t>(value_dim_)};
}

std::span<const double> SpatialField::at(std::size_t cell) const {
    return {values_.data() + cell * static_cast<std::size_t>(value_dim_),
            static_cast<std::size_t>(value_dim_)};
}

PhaseField::PhaseField(SpaceTimeGrid grid, int value_dim)
    : grid_(grid), value_dim_(value_dim) {
    if (value_dim < 1) {
        throw std::invalid_argument("PhaseField: value_dim must be positive");
    }
    values_.assign(grid_.interior_cell_count() * static_cast<std::size_t>(value_dim_), 0.0);
}

std::span<double> PhaseField::at(std::size_t cell) {
    return {values_.data() + cell * static_cast<std::size_t>(value_dim_),
            static_cast<std::size_t>(value_dim_)};
}

std::span<const double> PhaseField::at(std::size_t cell) const {
    return {values_.data() + cell * static_cast<std::size_t>(value_dim_),
            static_cast<std::size_t>(value_dim_)};
}

} // namespace turbmax
