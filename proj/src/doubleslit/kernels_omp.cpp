#include <algorithm>
#include <vector>

#include "qmeas/doubleslit/kernels.hpp"

namespace qmeas::doubleslit::kernels::omp {

namespace {

// Columns handled together by one thread in the y sweep; keeps rows of a block in cache.
constexpr std::size_t kColumnBlock = 64;

}  // namespace

void cayley_x(std::span<Complex> psi, const Grid2D& g, std::span<const std::uint8_t> blocked, const RunIndex& runs,
              const CayleyLine& line, const ThomasTable& table) {
    const auto nx = static_cast<std::ptrdiff_t>(g.nx());
    const auto ny = static_cast<std::ptrdiff_t>(g.ny());
    const Complex* cp = table.c_prime.data();
    const Complex* inv = table.inv_pivot.data();

#pragma omp parallel
    {
        std::vector<Complex> d(g.nx());
#pragma omp for schedule(static)
        for (std::ptrdiff_t j = 0; j < ny; ++j) {
            Complex* row = psi.data() + j * nx;
            const std::uint8_t* closed = blocked.data() + j * nx;
            const std::uint32_t* pos = runs.along_x.data() + j * nx;

            Complex prev_d = 0.0;
            for (std::ptrdiff_t i = 0; i < nx; ++i) {
                const Complex left = (i > 0) ? row[i - 1] : Complex(0.0);
                const Complex right = (i + 1 < nx) ? row[i + 1] : Complex(0.0);
                const Complex r = line.rhs_diag * row[i] + line.rhs_off * (left + right);
                prev_d = closed[i] ? Complex(0.0) : (r - line.lhs_off * prev_d) * inv[pos[i]];
                d[static_cast<std::size_t>(i)] = prev_d;
            }
            Complex next = 0.0;
            for (std::ptrdiff_t i = nx - 1; i >= 0; --i) {
                next = closed[i] ? Complex(0.0) : d[static_cast<std::size_t>(i)] - cp[pos[i]] * next;
                row[i] = next;
            }
        }
    }
}

void cayley_y(std::span<Complex> psi, const Grid2D& g, std::span<const std::uint8_t> blocked, const RunIndex& runs,
              const CayleyLine& line, const ThomasTable& table) {
    const std::size_t nx = g.nx();
    const std::size_t ny = g.ny();
    const Complex* cp = table.c_prime.data();
    const Complex* inv = table.inv_pivot.data();
    const auto blocks = static_cast<std::ptrdiff_t>((nx + kColumnBlock - 1) / kColumnBlock);

#pragma omp parallel
    {
        // d holds the forward-eliminated values of this block; rows kept apart for clarity.
        std::vector<Complex> d(ny * kColumnBlock);
        std::vector<Complex> below(kColumnBlock);
#pragma omp for schedule(static)
        for (std::ptrdiff_t blk = 0; blk < blocks; ++blk) {
            const std::size_t i0 = static_cast<std::size_t>(blk) * kColumnBlock;
            const std::size_t w = std::min(kColumnBlock, nx - i0);

            // Forward elimination; reads only the old psi, so the below-row value is taken as we go.
            for (std::size_t j = 0; j < ny; ++j) {
                const Complex* up = (j > 0) ? psi.data() + (j - 1) * nx + i0 : nullptr;
                const Complex* mid = psi.data() + j * nx + i0;
                const Complex* down = (j + 1 < ny) ? psi.data() + (j + 1) * nx + i0 : nullptr;
                const std::uint8_t* closed = blocked.data() + j * nx + i0;
                const std::uint32_t* pos = runs.along_y.data() + j * nx + i0;
                Complex* dj = d.data() + j * kColumnBlock;
                const Complex* dprev = (j > 0) ? d.data() + (j - 1) * kColumnBlock : nullptr;
                for (std::size_t c = 0; c < w; ++c) {
                    const Complex left = up ? up[c] : Complex(0.0);
                    const Complex right = down ? down[c] : Complex(0.0);
                    const Complex r = line.rhs_diag * mid[c] + line.rhs_off * (left + right);
                    const Complex pd = dprev ? dprev[c] : Complex(0.0);
                    dj[c] = closed[c] ? Complex(0.0) : (r - line.lhs_off * pd) * inv[pos[c]];
                }
            }
            // Back substitution, writing psi from the top row down to row 0.
            std::fill(below.begin(), below.end(), Complex(0.0));
            for (std::size_t j = ny; j-- > 0;) {
                Complex* out = psi.data() + j * nx + i0;
                const std::uint8_t* closed = blocked.data() + j * nx + i0;
                const std::uint32_t* pos = runs.along_y.data() + j * nx + i0;
                const Complex* dj = d.data() + j * kColumnBlock;
                for (std::size_t c = 0; c < w; ++c) {
                    below[c] = closed[c] ? Complex(0.0) : dj[c] - cp[pos[c]] * below[c];
                    out[c] = below[c];
                }
            }
        }
    }
}

double sponge(std::span<Complex> psi, const Grid2D& g, std::span<const double> factors) {
    const auto nx = static_cast<std::ptrdiff_t>(g.nx());
    const auto ny = static_cast<std::ptrdiff_t>(g.ny());
    std::vector<double> removed(g.ny(), 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < ny; ++j) {
        double s = 0.0;
        for (std::ptrdiff_t i = 0; i < nx; ++i) {
            const auto k = static_cast<std::size_t>(j * nx + i);
            const double before = std::norm(psi[k]);
            psi[k] *= factors[k];
            s += before - std::norm(psi[k]);
        }
        removed[static_cast<std::size_t>(j)] = s;
    }
    double total = 0.0;
    for (const double s : removed) total += s;
    return total * g.cell_area();
}

double norm2(std::span<const Complex> psi, const Grid2D& g) {
    const auto nx = static_cast<std::ptrdiff_t>(g.nx());
    const auto ny = static_cast<std::ptrdiff_t>(g.ny());
    std::vector<double> rows(g.ny(), 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < ny; ++j) {
        double s = 0.0;
        for (std::ptrdiff_t i = 0; i < nx; ++i) s += std::norm(psi[static_cast<std::size_t>(j * nx + i)]);
        rows[static_cast<std::size_t>(j)] = s;
    }
    double total = 0.0;
    for (const double s : rows) total += s;
    return total * g.cell_area();
}

}  // namespace qmeas::doubleslit::kernels::omp
