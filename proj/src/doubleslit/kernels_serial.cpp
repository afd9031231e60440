// Reference kernels: one grid line at a time, runs found explicitly, Thomas with divisions.

#include <vector>

#include "qmeas/doubleslit/kernels.hpp"

namespace qmeas::doubleslit::kernels::serial {

namespace {

// Applies the Cayley factor to one gathered line in place.
void solve_line(std::vector<Complex>& v, const std::vector<std::uint8_t>& closed, const CayleyLine& line) {
    const std::size_t n = v.size();
    std::vector<Complex> rhs(n);
    std::vector<Complex> cp(n);
    std::vector<Complex> dp(n);

    std::size_t start = 0;
    while (start < n) {
        if (closed[start]) {
            v[start] = 0.0;
            ++start;
            continue;
        }
        std::size_t end = start;
        while (end < n && !closed[end]) ++end;

        for (std::size_t k = start; k < end; ++k) {
            const Complex left = (k > start) ? v[k - 1] : Complex(0.0);
            const Complex right = (k + 1 < end) ? v[k + 1] : Complex(0.0);
            rhs[k] = line.rhs_diag * v[k] + line.rhs_off * (left + right);
        }
        for (std::size_t k = start; k < end; ++k) {
            const Complex prev_c = (k > start) ? cp[k - 1] : Complex(0.0);
            const Complex prev_d = (k > start) ? dp[k - 1] : Complex(0.0);
            const Complex pivot = line.lhs_diag - line.lhs_off * prev_c;
            cp[k] = line.lhs_off / pivot;
            dp[k] = (rhs[k] - line.lhs_off * prev_d) / pivot;
        }
        v[end - 1] = dp[end - 1];
        for (std::size_t k = end - 1; k-- > start;) v[k] = dp[k] - cp[k] * v[k + 1];
        start = end;
    }
}

}  // namespace

void cayley_x(std::span<Complex> psi, const Grid2D& g, std::span<const std::uint8_t> blocked, const CayleyLine& line) {
    std::vector<Complex> v(g.nx());
    std::vector<std::uint8_t> closed(g.nx());
    for (std::size_t j = 0; j < g.ny(); ++j) {
        for (std::size_t i = 0; i < g.nx(); ++i) {
            v[i] = psi[g.index(i, j)];
            closed[i] = blocked[g.index(i, j)];
        }
        solve_line(v, closed, line);
        for (std::size_t i = 0; i < g.nx(); ++i) psi[g.index(i, j)] = v[i];
    }
}

void cayley_y(std::span<Complex> psi, const Grid2D& g, std::span<const std::uint8_t> blocked, const CayleyLine& line) {
    std::vector<Complex> v(g.ny());
    std::vector<std::uint8_t> closed(g.ny());
    for (std::size_t i = 0; i < g.nx(); ++i) {
        for (std::size_t j = 0; j < g.ny(); ++j) {
            v[j] = psi[g.index(i, j)];
            closed[j] = blocked[g.index(i, j)];
        }
        solve_line(v, closed, line);
        for (std::size_t j = 0; j < g.ny(); ++j) psi[g.index(i, j)] = v[j];
    }
}

double sponge(std::span<Complex> psi, std::span<const double> factors, double cell_area) {
    double removed = 0.0;
    for (std::size_t k = 0; k < psi.size(); ++k) {
        const double before = std::norm(psi[k]);
        psi[k] *= factors[k];
        removed += before - std::norm(psi[k]);
    }
    return removed * cell_area;
}

double norm2(std::span<const Complex> psi, double cell_area) {
    double s = 0.0;
    for (const auto& v : psi) s += std::norm(v);
    return s * cell_area;
}

}  // namespace qmeas::doubleslit::kernels::serial
