#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "qmeas/doubleslit/grid.hpp"

namespace qmeas::doubleslit {

/// Wall layout. The source sits at the origin and moves toward +x.
///
///  - an outer V ("wedge") opening from (wedge_back_x, 0) behind the source to the outer
///    edges of the holes at the slit plane;
///  - an inner V from (inner_tip_x, 0) to the inner edges of the holes, so each hole is fed
///    by its own channel;
///  - the slit plane x = slit_x, walled except for hole A (y in hole_center +- hole_half_width)
///    and hole B (its mirror image below y = 0);
///  - branch 2 only: the separator y = 0 from the slit plane to separator_end_x
///    (the right edge of the grid when unset).
///
/// Lengths are in the same units as the grid. Walls are the cells whose centers lie within
/// wall_half_thickness of a segment.
struct SlitGeometry {
    double wedge_back_x = -90.0;
    double inner_tip_x = 30.0;
    double slit_x = 120.0;
    double hole_center = 30.0;
    double hole_half_width = 8.0;
    double wall_half_thickness = 1.0;
    std::optional<double> separator_end_x;
    bool block_hole_a = false;
    bool block_hole_b = false;
};

/// Infinite-potential cells (Dirichlet mask) plus the kinetic constants of the Hamiltonian.
class Potential2D {
public:
    /// No walls at all (V = 0 inside the box).
    static Potential2D free(const Grid2D& grid, double hbar = 1.0, double mass = 1.0);
    Potential2D(Grid2D grid, std::vector<std::uint8_t> blocked, int branch, double hbar, double mass);

    const Grid2D& grid() const noexcept { return grid_; }
    const std::vector<std::uint8_t>& blocked() const noexcept { return blocked_; }
    bool is_blocked(std::size_t i, std::size_t j) const { return blocked_[grid_.index(i, j)] != 0; }
    int branch() const noexcept { return branch_; }
    double hbar() const noexcept { return hbar_; }
    double mass() const noexcept { return mass_; }
    std::size_t blocked_count() const;

private:
    Grid2D grid_;
    std::vector<std::uint8_t> blocked_;
    int branch_ = 1;
    double hbar_ = 1.0;
    double mass_ = 1.0;
};

/// Rasterizes the walls for branch 1 (V1) or branch 2 (V1 plus the separator).
/// Throws GeometryOutOfDomain when the layout does not fit (source and wedge inside the box,
/// slit plane before the screen b, holes inside the y range).
Potential2D build_potential(const Grid2D& grid, const PhysicalParams& params, int branch, const SlitGeometry& geometry);

/// Zero amplitudes on blocked cells. Idempotent.
void apply_mask(WavePacket2D& packet, const Potential2D& potential);

}  // namespace qmeas::doubleslit
