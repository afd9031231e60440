#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace qmeas::doubleslit {

using Complex = std::complex<double>;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

/// Physical constants and the detector layout. All strictly positive.
struct PhysicalParams {
    double hbar = 1.0;   // action
    double mass = 1.0;   // mass
    double k0 = 1.0;     // carrier wavenumber, 1/length
    double sigma = 10.0; // packet width, length
    double delta = 4.0;  // detector strip height, length
    double b = 250.0;    // screen position x = b, length

    /// Throws ValidationError if any field is not strictly positive and finite.
    void validate() const;
};

/// Rectangular node grid. x_i = x_min + i*hx, y_j = (j - ny/2)*hy, so y = 0 is row ny/2.
/// Row-major storage: index(i, j) = j*nx + i.
class Grid2D {
public:
    Grid2D(std::size_t nx, std::size_t ny, double lx, double ly, double x_min);

    std::size_t nx() const noexcept { return nx_; }
    std::size_t ny() const noexcept { return ny_; }
    double lx() const noexcept { return lx_; }
    double ly() const noexcept { return ly_; }
    double hx() const noexcept { return lx_ / static_cast<double>(nx_); }
    double hy() const noexcept { return ly_ / static_cast<double>(ny_); }
    double cell_area() const noexcept { return hx() * hy(); }
    std::size_t size() const noexcept { return nx_ * ny_; }

    double x(std::size_t i) const noexcept { return x_min_ + static_cast<double>(i) * hx(); }
    double y(std::size_t j) const noexcept {
        return (static_cast<double>(j) - static_cast<double>(ny_ / 2)) * hy();
    }
    double x_min() const noexcept { return x_min_; }
    double x_max() const noexcept { return x(nx_ - 1); }
    double y_min() const noexcept { return y(0); }
    double y_max() const noexcept { return y(ny_ - 1); }

    std::size_t index(std::size_t i, std::size_t j) const noexcept { return j * nx_ + i; }

    friend bool operator==(const Grid2D&, const Grid2D&) = default;

private:
    std::size_t nx_;
    std::size_t ny_;
    double lx_;
    double ly_;
    double x_min_;
};

/// Discretized wavefunction. `absorbed` accumulates probability removed by the boundary sponge.
struct WavePacket2D {
    Grid2D grid;
    std::vector<Complex> psi;
    double absorbed = 0.0;

    /// Discrete L2 norm squared: sum |psi|^2 * cell area.
    double norm2() const;
};

/// <a, b> on the grid (sum conj(a) b * cell area).
Complex grid_inner(const WavePacket2D& a, const WavePacket2D& b);

/// Gaussian times plane wave e^{i k0 (x - cx)}, width sigma in both directions, normalized on the grid.
/// Throws UnresolvableScale unless sigma >= 4*spacing and k0 <= pi/(2*hx).
WavePacket2D init_packet(const Grid2D& grid, const PhysicalParams& params, Vec2 center);

/// <p> = hbar * sum_k k |psi_hat(k)|^2 / sum |psi_hat|^2, from per-line spectral transforms.
Vec2 momentum_expectation(const WavePacket2D& packet, double hbar);
/// <x>, <y> weighted by |psi|^2.
Vec2 position_expectation(const WavePacket2D& packet);

}  // namespace qmeas::doubleslit
