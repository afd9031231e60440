#pragma once

// Dense complex vectors and operators at small dimension.
//
// CVec and COp are immutable value types over Eigen storage. Everything the
// measurement and causality layers need (inner products, tensor products,
// adjoints, positivity, commutators) lives here.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>

#include <Eigen/Dense>

namespace qmeas {

using Complex = std::complex<double>;

class CVec {
public:
    CVec() = default;
    explicit CVec(Eigen::VectorXcd entries);
    CVec(std::initializer_list<Complex> entries);

    static CVec zero(std::size_t dim);
    /// Standard basis vector e_index.
    static CVec basis(std::size_t dim, std::size_t index);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(v_.size()); }
    Complex operator[](std::size_t i) const { return v_(static_cast<Eigen::Index>(i)); }
    double norm() const { return v_.norm(); }
    CVec normalized() const;

    const Eigen::VectorXcd& eigen() const noexcept { return v_; }

    friend CVec operator+(const CVec& a, const CVec& b);
    friend CVec operator-(const CVec& a, const CVec& b);
    friend CVec operator*(Complex s, const CVec& a);

private:
    Eigen::VectorXcd v_;
};

class COp {
public:
    COp() = default;
    explicit COp(Eigen::MatrixXcd entries);

    static COp identity(std::size_t dim);
    static COp zero(std::size_t dim);
    /// |a><b|
    static COp outer(const CVec& a, const CVec& b);
    /// |v><v| for the given (not necessarily unit) vector.
    static COp projector(const CVec& v) { return outer(v, v); }
    static COp diagonal(std::span<const Complex> diag);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    Complex operator()(std::size_t r, std::size_t c) const {
        return m_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }

    COp adjoint() const;
    CVec apply(const CVec& v) const;
    Complex trace() const { return m_.trace(); }
    /// Largest entry magnitude of this - other.
    double max_abs_diff(const COp& other) const;

    const Eigen::MatrixXcd& eigen() const noexcept { return m_; }

    friend COp operator+(const COp& a, const COp& b);
    friend COp operator-(const COp& a, const COp& b);
    friend COp operator*(const COp& a, const COp& b);
    friend COp operator*(Complex s, const COp& a);

private:
    Eigen::MatrixXcd m_;
};

/// <a, b>, conjugate-linear in the first argument.
Complex inner(const CVec& a, const CVec& b);

CVec tensor_vec(const CVec& a, const CVec& b);
/// Kronecker product; index (i*dim(B) + k, j*dim(B) + l) holds A(i,j) B(k,l).
COp tensor_op(const COp& a, const COp& b);

/// max |A - A*| entrywise.
double hermiticity_residual(const COp& a);

/// True iff A is Hermitian within `tol` and every eigenvalue of (A + A*)/2 is >= -tol.
bool is_positive(const COp& a, double tol);

/// Smallest eigenvalue of the Hermitian part (A + A*)/2.
double min_eigenvalue(const COp& a);

/// Largest singular value.
double operator_norm(const COp& a);

/// Operator norm of AB - BA.
double commutator_norm(const COp& a, const COp& b);

/// max |U*U - I| entrywise.
double unitarity_residual(const COp& u);

}  // namespace qmeas
