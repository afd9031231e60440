#include "qmeas/doubleslit/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "qmeas/errors.hpp"

namespace qmeas::doubleslit {

namespace {

void require_positive(double v, const char* name) {
    if (!(std::isfinite(v) && v > 0.0)) throw ValidationError(std::string("PhysicalParams: ") + name + " must be > 0");
}

// Angular frequency of DFT bin m for n samples at spacing h.
double dft_wavenumber(std::size_t m, std::size_t n, double h) {
    const auto mm = static_cast<double>(m);
    const auto nn = static_cast<double>(n);
    const double signed_m = (2 * m < n) ? mm : mm - nn;
    return 2.0 * std::numbers::pi * signed_m / (nn * h);
}

// Mean wavenumber along one axis. `howmany` transforms of length `n`, elements `stride` apart,
// successive transforms `dist` apart.
double mean_wavenumber(const std::vector<Complex>& psi, int n, int howmany, int stride, int dist, double h) {
    const auto total = psi.size();
    auto* in = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
    auto* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
    for (std::size_t k = 0; k < total; ++k) {
        in[k][0] = psi[k].real();
        in[k][1] = psi[k].imag();
    }
    fftw_plan plan = fftw_plan_many_dft(1, &n, howmany, in, nullptr, stride, dist, out, nullptr, stride, dist,
                                        FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);

    double weighted = 0.0;
    double mass = 0.0;
    for (int line = 0; line < howmany; ++line)
        for (int m = 0; m < n; ++m) {
            const auto idx = static_cast<std::size_t>(line * dist + m * stride);
            const double w = out[idx][0] * out[idx][0] + out[idx][1] * out[idx][1];
            weighted += w * dft_wavenumber(static_cast<std::size_t>(m), static_cast<std::size_t>(n), h);
            mass += w;
        }
    fftw_destroy_plan(plan);
    fftw_free(in);
    fftw_free(out);
    return mass > 0.0 ? weighted / mass : 0.0;
}

}  // namespace

void PhysicalParams::validate() const {
    require_positive(hbar, "hbar");
    require_positive(mass, "mass");
    require_positive(k0, "k0");
    require_positive(sigma, "sigma");
    require_positive(delta, "delta");
    require_positive(b, "b");
}

Grid2D::Grid2D(std::size_t nx, std::size_t ny, double lx, double ly, double x_min)
    : nx_(nx), ny_(ny), lx_(lx), ly_(ly), x_min_(x_min) {
    if (nx_ < 16 || ny_ < 16) throw ValidationError("Grid2D: nx and ny must be at least 16");
    if (!(std::isfinite(lx_) && lx_ > 0.0 && std::isfinite(ly_) && ly_ > 0.0))
        throw ValidationError("Grid2D: extents must be positive");
    if (!std::isfinite(x_min_)) throw ValidationError("Grid2D: x_min must be finite");
}

double WavePacket2D::norm2() const {
    double s = 0.0;
    for (const auto& v : psi) s += std::norm(v);
    return s * grid.cell_area();
}

Complex grid_inner(const WavePacket2D& a, const WavePacket2D& b) {
    if (!(a.grid == b.grid)) throw ValidationError("grid_inner: packets live on different grids");
    Complex s = 0.0;
    for (std::size_t k = 0; k < a.psi.size(); ++k) s += std::conj(a.psi[k]) * b.psi[k];
    return s * a.grid.cell_area();
}

WavePacket2D init_packet(const Grid2D& grid, const PhysicalParams& params, Vec2 center) {
    params.validate();
    const double spacing = std::max(grid.hx(), grid.hy());
    if (params.sigma < 4.0 * spacing)
        throw UnresolvableScale("init_packet: sigma " + std::to_string(params.sigma) + " < 4 * spacing " +
                                std::to_string(spacing));
    if (params.k0 > std::numbers::pi / (2.0 * grid.hx()))
        throw UnresolvableScale("init_packet: k0 " + std::to_string(params.k0) + " exceeds pi/(2 hx)");
    if (center.x < grid.x_min() || center.x > grid.x_max() || center.y < grid.y_min() || center.y > grid.y_max())
        throw GeometryOutOfDomain("init_packet: center lies outside the grid");

    WavePacket2D p{grid, std::vector<Complex>(grid.size()), 0.0};
    const double s2 = params.sigma * params.sigma;
    const double amp = 1.0 / (std::sqrt(std::sqrt(std::numbers::pi) * params.sigma));
    for (std::size_t j = 0; j < grid.ny(); ++j) {
        const double dy = grid.y(j) - center.y;
        const double gy = amp * std::exp(-dy * dy / (2.0 * s2));
        for (std::size_t i = 0; i < grid.nx(); ++i) {
            const double dx = grid.x(i) - center.x;
            const double gx = amp * std::exp(-dx * dx / (2.0 * s2));
            p.psi[grid.index(i, j)] = gx * gy * std::polar(1.0, params.k0 * dx);
        }
    }
    const double scale = 1.0 / std::sqrt(p.norm2());
    for (auto& v : p.psi) v *= scale;
    return p;
}

Vec2 momentum_expectation(const WavePacket2D& packet, double hbar) {
    const auto& g = packet.grid;
    const int nx = static_cast<int>(g.nx());
    const int ny = static_cast<int>(g.ny());
    const double kx = mean_wavenumber(packet.psi, nx, ny, 1, nx, g.hx());
    const double ky = mean_wavenumber(packet.psi, ny, nx, nx, 1, g.hy());
    return {hbar * kx, hbar * ky};
}

Vec2 position_expectation(const WavePacket2D& packet) {
    const auto& g = packet.grid;
    double sx = 0.0;
    double sy = 0.0;
    double m = 0.0;
    for (std::size_t j = 0; j < g.ny(); ++j)
        for (std::size_t i = 0; i < g.nx(); ++i) {
            const double w = std::norm(packet.psi[g.index(i, j)]);
            sx += w * g.x(i);
            sy += w * g.y(j);
            m += w;
        }
    if (m == 0.0) throw NumericError("position_expectation: zero packet");
    return {sx / m, sy / m};
}

}  // namespace qmeas::doubleslit
