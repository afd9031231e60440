#include "qmeas/kernel.hpp"

#include <algorithm>

#include "qmeas/errors.hpp"

namespace qmeas {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* where) {
    if (a != b) throw DimensionMismatch(a, b, where);
}

}  // namespace

CVec::CVec(Eigen::VectorXcd entries) : v_(std::move(entries)) {}

CVec::CVec(std::initializer_list<Complex> entries) : v_(static_cast<Eigen::Index>(entries.size())) {
    Eigen::Index i = 0;
    for (const auto& e : entries) v_(i++) = e;
}

CVec CVec::zero(std::size_t dim) { return CVec(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim))); }

CVec CVec::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) throw DimensionMismatch(dim, index, "CVec::basis index");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return CVec(std::move(v));
}

CVec CVec::normalized() const {
    const double n = norm();
    if (n == 0.0) throw NumericError("cannot normalize the zero vector");
    return CVec(v_ / n);
}

CVec operator+(const CVec& a, const CVec& b) {
    require_same_dim(a.dim(), b.dim(), "CVec +");
    return CVec(a.v_ + b.v_);
}

CVec operator-(const CVec& a, const CVec& b) {
    require_same_dim(a.dim(), b.dim(), "CVec -");
    return CVec(a.v_ - b.v_);
}

CVec operator*(Complex s, const CVec& a) { return CVec(s * a.v_); }

COp::COp(Eigen::MatrixXcd entries) : m_(std::move(entries)) {
    if (m_.rows() != m_.cols()) {
        throw DimensionMismatch(static_cast<std::size_t>(m_.rows()), static_cast<std::size_t>(m_.cols()),
                                "COp must be square");
    }
}

COp COp::identity(std::size_t dim) {
    return COp(Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)));
}

COp COp::zero(std::size_t dim) {
    return COp(Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)));
}

COp COp::outer(const CVec& a, const CVec& b) {
    require_same_dim(a.dim(), b.dim(), "COp::outer");
    return COp(a.eigen() * b.eigen().adjoint());
}

COp COp::diagonal(std::span<const Complex> diag) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(diag.size()),
                                                static_cast<Eigen::Index>(diag.size()));
    for (std::size_t i = 0; i < diag.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = diag[i];
    return COp(std::move(m));
}

COp COp::adjoint() const { return COp(m_.adjoint()); }

CVec COp::apply(const CVec& v) const {
    require_same_dim(dim(), v.dim(), "COp::apply");
    return CVec(m_ * v.eigen());
}

double COp::max_abs_diff(const COp& other) const {
    require_same_dim(dim(), other.dim(), "COp::max_abs_diff");
    if (dim() == 0) return 0.0;
    return (m_ - other.m_).cwiseAbs().maxCoeff();
}

COp operator+(const COp& a, const COp& b) {
    require_same_dim(a.dim(), b.dim(), "COp +");
    return COp(a.m_ + b.m_);
}

COp operator-(const COp& a, const COp& b) {
    require_same_dim(a.dim(), b.dim(), "COp -");
    return COp(a.m_ - b.m_);
}

COp operator*(const COp& a, const COp& b) {
    require_same_dim(a.dim(), b.dim(), "COp *");
    return COp(a.m_ * b.m_);
}

COp operator*(Complex s, const COp& a) { return COp(s * a.m_); }

Complex inner(const CVec& a, const CVec& b) {
    require_same_dim(a.dim(), b.dim(), "inner");
    return a.eigen().dot(b.eigen());  // Eigen's dot conjugates the left operand
}

CVec tensor_vec(const CVec& a, const CVec& b) {
    const auto nb = static_cast<Eigen::Index>(b.dim());
    Eigen::VectorXcd out(static_cast<Eigen::Index>(a.dim()) * nb);
    for (Eigen::Index i = 0; i < a.eigen().size(); ++i) out.segment(i * nb, nb) = a.eigen()(i) * b.eigen();
    return CVec(std::move(out));
}

COp tensor_op(const COp& a, const COp& b) {
    const auto na = static_cast<Eigen::Index>(a.dim());
    const auto nb = static_cast<Eigen::Index>(b.dim());
    Eigen::MatrixXcd out(na * nb, na * nb);
    for (Eigen::Index i = 0; i < na; ++i)
        for (Eigen::Index j = 0; j < na; ++j) out.block(i * nb, j * nb, nb, nb) = a.eigen()(i, j) * b.eigen();
    return COp(std::move(out));
}

double hermiticity_residual(const COp& a) {
    if (a.dim() == 0) return 0.0;
    return (a.eigen() - a.eigen().adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const COp& a) {
    if (a.dim() == 0) return 0.0;
    const Eigen::MatrixXcd herm = 0.5 * (a.eigen() + a.eigen().adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

bool is_positive(const COp& a, double tol) {
    if (tol < 0.0) throw ValidationError("is_positive: tolerance must be non-negative");
    if (hermiticity_residual(a) > tol) return false;
    return min_eigenvalue(a) >= -tol;
}

double operator_norm(const COp& a) {
    if (a.dim() == 0) return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a.eigen());
    return svd.singularValues()(0);
}

double commutator_norm(const COp& a, const COp& b) {
    require_same_dim(a.dim(), b.dim(), "commutator_norm");
    return operator_norm(COp(a.eigen() * b.eigen() - b.eigen() * a.eigen()));
}

double unitarity_residual(const COp& u) {
    if (u.dim() == 0) return 0.0;
    const auto n = static_cast<Eigen::Index>(u.dim());
    return (u.eigen().adjoint() * u.eigen() - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
}

}  // namespace qmeas
