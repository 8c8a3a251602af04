#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace turbmax {

/// Uniform cell partition of the space-time cylinder (0,T) x torus^d.  The
/// torus has side 2*pi along every axis; time is split into nt slabs and each
/// spatial axis into nx cells, giving nt*nx^d interior cells of equal volume.
///
/// When final_layer is set, an extra sheet of nx^d zero-volume cells sits at
/// t = T.  Those cells never carry oscillation atoms; they exist so that
/// concentration mass on the closed-cylinder boundary {T} x torus^d has a
/// place to live.  There is no corresponding sheet at t = 0: mass there would
/// be invisible to the time disintegration, so it is simply not representable.
class SpaceTimeGrid {
public:
    SpaceTimeGrid(double T, int d, int nt, int nx, bool final_layer = false);

    double T() const noexcept { return T_; }
    int d() const noexcept { return d_; }
    int nt() const noexcept { return nt_; }
    int nx() const noexcept { return nx_; }
    bool has_final_layer() const noexcept { return final_layer_; }

    double dt() const noexcept { return T_ / nt_; }
    double dx() const noexcept;

    std::size_t spatial_cell_count() const noexcept { return spatial_cells_; }
    std::size_t interior_cell_count() const noexcept { return nt_ * spatial_cells_; }
    std::size_t cell_count() const noexcept {
        return interior_cell_count() + (final_layer_ ? spatial_cells_ : 0);
    }

    /// Volume of one interior cell: (T/nt) * (2*pi/nx)^d.
    double cell_volume() const noexcept { return cell_volume_; }
    /// Volume of one spatial cell: (2*pi/nx)^d.
    double spatial_cell_volume() const noexcept { return spatial_volume_; }

    bool is_final_layer(std::size_t cell) const noexcept {
        return final_layer_ && cell >= interior_cell_count();
    }
    /// Time slab index in [0, nt); final-layer cells report nt.
    int time_index(std::size_t cell) const noexcept {
        return static_cast<int>(cell / spatial_cells_);
    }
    std::size_t spatial_index(std::size_t cell) const noexcept {
        return cell % spatial_cells_;
    }

    /// Midpoint of the cell: t into *t_out, the d spatial coordinates into x.
    /// Final-layer cells sit at t = T exactly.
    void cell_center(std::size_t cell, double& t_out, std::span<double> x) const;
    /// Midpoint of a spatial cell, row-major flattened index.
    void spatial_center(std::size_t spatial_cell, std::span<double> x) const;

    bool operator==(const SpaceTimeGrid& other) const noexcept;
    bool operator!=(const SpaceTimeGrid& other) const noexcept { return !(*this == other); }

private:
    double T_;
    int d_;
    int nt_;
    int nx_;
    bool final_layer_;
    std::size_t spatial_cells_;
    double cell_volume_;
    double spatial_volume_;
};

/// Values attached to the spatial cells of one time sheet (initial data lives
/// here): value_dim doubles per cell, cells flattened row-major.
class SpatialField {
public:
    SpatialField(int d, int nx, int value_dim);
    SpatialField(int d, int nx, int value_dim, std::vector<double> values);

    int d() const noexcept { return d_; }
    int nx() const noexcept { return nx_; }
    int value_dim() const noexcept { return value_dim_; }
    std::size_t cell_count() const noexcept { return cells_; }

    std::span<double> at(std::size_t cell);
    std::span<const double> at(std::size_t cell) const;

    std::span<const double> raw() const noexcept { return values_; }
    std::span<double> raw() noexcept { return values_; }

private:
    int d_;
    int nx_;
    int value_dim_;
    std::size_t cells_;
    std::vector<double> values_;
};

/// Values attached to the interior cells of a space-time grid (barycenter
/// fields live here).  Final-layer cells carry no oscillation data, so they
/// are deliberately absent.
class PhaseField {
public:
    PhaseField(SpaceTimeGrid grid, int value_dim);

    const SpaceTimeGrid& grid() const noexcept { return grid_; }
    int value_dim() const noexcept { return value_dim_; }
    std::size_t cell_count() const noexcept { return grid_.interior_cell_count(); }

    std::span<double> at(std::size_t cell);
    std::span<const double> at(std::size_t cell) const;

    std::span<const double> raw() const noexcept { return values_; }
    std::span<double> raw() noexcept { return values_; }

private:
    SpaceTimeGrid grid_;
    int value_dim_;
    std::vector<double> values_;
};

} // namespace turbmax
