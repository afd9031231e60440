#include <algorithm>
#include <cmath>

#include "qmeas/doubleslit/kernels.hpp"
#include "qmeas/errors.hpp"

namespace qmeas::doubleslit::kernels {

CayleyLine CayleyLine::make(double tau, double kinetic, double h) {
    const Complex beta(0.0, tau * kinetic / (2.0 * h * h));
    constexpr double b_diag = 10.0 / 12.0;
    constexpr double b_off = 1.0 / 12.0;
    return {b_diag + 2.0 * beta, b_off - beta, b_diag - 2.0 * beta, b_off + beta};
}

RunIndex RunIndex::build(const Grid2D& g, std::span<const std::uint8_t> blocked) {
    if (blocked.size() != g.size()) throw ValidationError("RunIndex: mask size mismatch");
    RunIndex r{std::vector<std::uint32_t>(g.size(), 0), std::vector<std::uint32_t>(g.size(), 0)};
    for (std::size_t j = 0; j < g.ny(); ++j) {
        std::uint32_t pos = 0;
        for (std::size_t i = 0; i < g.nx(); ++i) {
            const auto k = g.index(i, j);
            if (blocked[k]) {
                pos = 0;
            } else {
                r.along_x[k] = pos++;
            }
        }
    }
    for (std::size_t i = 0; i < g.nx(); ++i) {
        std::uint32_t pos = 0;
        for (std::size_t j = 0; j < g.ny(); ++j) {
            const auto k = g.index(i, j);
            if (blocked[k]) {
                pos = 0;
            } else {
                r.along_y[k] = pos++;
            }
        }
    }
    return r;
}

ThomasTable ThomasTable::build(const CayleyLine& line, std::size_t max_len) {
    ThomasTable t{std::vector<Complex>(max_len), std::vector<Complex>(max_len)};
    Complex prev_c = 0.0;
    for (std::size_t k = 0; k < max_len; ++k) {
        t.inv_pivot[k] = 1.0 / (line.lhs_diag - line.lhs_off * prev_c);
        t.c_prime[k] = line.lhs_off * t.inv_pivot[k];
        prev_c = t.c_prime[k];
    }
    return t;
}

std::vector<double> sponge_factors(const Grid2D& g, std::size_t width, double strength, double dt) {
    std::vector<double> f(g.size(), 1.0);
    if (width == 0 || strength == 0.0) return f;
    if (2 * width >= std::min(g.nx(), g.ny())) throw ValidationError("sponge_factors: layer wider than half the grid");
    const auto w = static_cast<double>(width);
    auto depth = [&](std::size_t i, std::size_t n) {
        // 0 in the interior, rising to 1 at the outermost cell.
        const double from_low = static_cast<double>(width) - static_cast<double>(i);
        const double from_high = static_cast<double>(i) - static_cast<double>(n - 1 - width);
        return std::max({0.0, from_low / w, from_high / w});
    };
    for (std::size_t j = 0; j < g.ny(); ++j)
        for (std::size_t i = 0; i < g.nx(); ++i) {
            const double s = std::max(depth(i, g.nx()), depth(j, g.ny()));
            if (s > 0.0) f[g.index(i, j)] = std::exp(-strength * s * s * dt);
        }
    return f;
}

}  // namespace qmeas::doubleslit::kernels
