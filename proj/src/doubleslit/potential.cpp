#include "qmeas/doubleslit/potential.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qmeas/errors.hpp"

namespace qmeas::doubleslit {

namespace {

struct Segment {
    Vec2 a;
    Vec2 b;
};

double distance_to_segment(Vec2 p, const Segment& s) {
    const double dx = s.b.x - s.a.x;
    const double dy = s.b.y - s.a.y;
    const double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp(((p.x - s.a.x) * dx + (p.y - s.a.y) * dy) / len2, 0.0, 1.0);
    const double ex = s.a.x + t * dx - p.x;
    const double ey = s.a.y + t * dy - p.y;
    return std::sqrt(ex * ex + ey * ey);
}

void rasterize(const Grid2D& g, const Segment& s, double half_thickness, std::vector<std::uint8_t>& blocked) {
    for (std::size_t j = 0; j < g.ny(); ++j)
        for (std::size_t i = 0; i < g.nx(); ++i)
            if (distance_to_segment({g.x(i), g.y(j)}, s) <= half_thickness) blocked[g.index(i, j)] = 1;
}

void check_fits(const Grid2D& g, const PhysicalParams& params, const SlitGeometry& geo) {
    auto fail = [](const std::string& what) { throw GeometryOutOfDomain("build_potential: " + what); };
    const double hole_top = geo.hole_center + geo.hole_half_width;
    const double hole_bottom = geo.hole_center - geo.hole_half_width;
    if (!(geo.hole_half_width > 0.0) || !(geo.wall_half_thickness > 0.0)) fail("hole width and wall thickness must be > 0");
    if (!(hole_bottom > geo.wall_half_thickness)) fail("holes overlap the central wall");
    if (!(geo.wedge_back_x < 0.0 && geo.wedge_back_x > g.x_min())) fail("wedge must start behind the source inside the box");
    if (!(geo.inner_tip_x > 0.0 && geo.inner_tip_x < geo.slit_x)) fail("inner tip must lie between source and slit plane");
    if (!(geo.slit_x < params.b)) fail("slit plane must lie before the screen");
    if (!(params.b < g.x_max())) fail("screen lies outside the box");
    if (!(hole_top < g.y_max() && -hole_top > g.y_min())) fail("holes lie outside the box");
    if (geo.separator_end_x && !(*geo.separator_end_x > geo.slit_x)) fail("separator must end after the slit plane");
}

}  // namespace

Potential2D::Potential2D(Grid2D grid, std::vector<std::uint8_t> blocked, int branch, double hbar, double mass)
    : grid_(std::move(grid)), blocked_(std::move(blocked)), branch_(branch), hbar_(hbar), mass_(mass) {
    if (blocked_.size() != grid_.size()) throw ValidationError("Potential2D: mask size does not match the grid");
    if (branch_ != 1 && branch_ != 2) throw ValidationError("Potential2D: branch must be 1 or 2");
    if (!(hbar_ > 0.0 && mass_ > 0.0)) throw ValidationError("Potential2D: hbar and mass must be > 0");
}

Potential2D Potential2D::free(const Grid2D& grid, double hbar, double mass) {
    return Potential2D(grid, std::vector<std::uint8_t>(grid.size(), 0), 1, hbar, mass);
}

std::size_t Potential2D::blocked_count() const {
    return static_cast<std::size_t>(std::count(blocked_.begin(), blocked_.end(), std::uint8_t{1}));
}

Potential2D build_potential(const Grid2D& g, const PhysicalParams& params, int branch, const SlitGeometry& geo) {
    params.validate();
    if (branch != 1 && branch != 2) throw ValidationError("build_potential: branch must be 1 or 2");
    check_fits(g, params, geo);

    const double top = geo.hole_center + geo.hole_half_width;
    const double bottom = geo.hole_center - geo.hole_half_width;
    const double edge_top = g.y_max() + g.hy();
    const double edge_bottom = g.y_min() - g.hy();
    const double t = geo.wall_half_thickness;

    std::vector<Segment> walls{
        {{geo.wedge_back_x, 0.0}, {geo.slit_x, top}},
        {{geo.wedge_back_x, 0.0}, {geo.slit_x, -top}},
        {{geo.inner_tip_x, 0.0}, {geo.slit_x, bottom}},
        {{geo.inner_tip_x, 0.0}, {geo.slit_x, -bottom}},
        {{geo.slit_x, top}, {geo.slit_x, edge_top}},
        {{geo.slit_x, -bottom}, {geo.slit_x, bottom}},
        {{geo.slit_x, -top}, {geo.slit_x, edge_bottom}},
    };
    if (geo.block_hole_a) walls.push_back({{geo.slit_x, bottom}, {geo.slit_x, top}});
    if (geo.block_hole_b) walls.push_back({{geo.slit_x, -top}, {geo.slit_x, -bottom}});
    if (branch == 2) walls.push_back({{geo.slit_x, 0.0}, {geo.separator_end_x.value_or(g.x_max() + g.hx()), 0.0}});

    std::vector<std::uint8_t> blocked(g.size(), 0);
    for (const auto& s : walls) rasterize(g, s, t, blocked);
    return Potential2D(g, std::move(blocked), branch, params.hbar, params.mass);
}

void apply_mask(WavePacket2D& packet, const Potential2D& potential) {
    if (!(packet.grid == potential.grid())) throw ValidationError("apply_mask: grid mismatch");
    const auto& m = potential.blocked();
    for (std::size_t k = 0; k < m.size(); ++k)
        if (m[k]) packet.psi[k] = 0.0;
}

}  // namespace qmeas::doubleslit
