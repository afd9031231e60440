#pragma once

// Grid kernels for the alternating-direction Crank-Nicolson stepper.
//
// Every directional factor is the Cayley transform
//     C(tau) = (B - beta T)^{-1} (B + beta T),   beta = i tau (hbar/2m) / (2 h^2)
// of the compact fourth-order Laplacian B^{-1} T / h^2 with B = tridiag(1, 10, 1)/12 and
// T = tridiag(1, -2, 1), restricted to each open run of cells along a grid line (blocked cells
// and the box edge are Dirichlet zeros). B and T commute on every run, so C is exactly unitary.
//
// Two implementations are kept side by side:
//   serial::  textbook per-line Thomas solves; the reference used in tests.
//   omp::     table-driven, branch-free sweeps parallelized with OpenMP over lines/columns.
// Reductions in omp:: are summed per row and then serially, so results do not depend on the
// thread count.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "qmeas/doubleslit/grid.hpp"

namespace qmeas::doubleslit::kernels {

/// Constant tridiagonal coefficients of one Cayley factor.
struct CayleyLine {
    Complex lhs_diag;
    Complex lhs_off;
    Complex rhs_diag;
    Complex rhs_off;

    /// `kinetic` is hbar/(2m); `tau` may be negative (inverse / adjoint factor).
    static CayleyLine make(double tau, double kinetic, double h);
};

/// Position of each cell within its open run along x and along y (0 at the first open cell).
struct RunIndex {
    std::vector<std::uint32_t> along_x;
    std::vector<std::uint32_t> along_y;

    static RunIndex build(const Grid2D& grid, std::span<const std::uint8_t> blocked);
};

/// Thomas elimination factors of a constant-coefficient system, by position within a run.
struct ThomasTable {
    std::vector<Complex> c_prime;
    std::vector<Complex> inv_pivot;

    static ThomasTable build(const CayleyLine& line, std::size_t max_len);
};

/// Per-cell sponge multiplier exp(-strength * s^2 * dt), s the normalized depth into a layer of
/// `width` cells along each box edge; 1 elsewhere.
std::vector<double> sponge_factors(const Grid2D& grid, std::size_t width, double strength, double dt);

namespace serial {

void cayley_x(std::span<Complex> psi, const Grid2D& grid, std::span<const std::uint8_t> blocked, const CayleyLine& line);
void cayley_y(std::span<Complex> psi, const Grid2D& grid, std::span<const std::uint8_t> blocked, const CayleyLine& line);
/// Multiplies by the sponge factors; returns the removed probability.
double sponge(std::span<Complex> psi, std::span<const double> factors, double cell_area);
double norm2(std::span<const Complex> psi, double cell_area);

}  // namespace serial

namespace omp {

void cayley_x(std::span<Complex> psi, const Grid2D& grid, std::span<const std::uint8_t> blocked,
              const RunIndex& runs, const CayleyLine& line, const ThomasTable& table);
void cayley_y(std::span<Complex> psi, const Grid2D& grid, std::span<const std::uint8_t> blocked,
              const RunIndex& runs, const CayleyLine& line, const ThomasTable& table);
double sponge(std::span<Complex> psi, const Grid2D& grid, std::span<const double> factors);
double norm2(std::span<const Complex> psi, const Grid2D& grid);

}  // namespace omp

}  // namespace qmeas::doubleslit::kernels
