#include <gtest/gtest.h>

#include "qmeas/errors.hpp"
#include "qmeas/kernel.hpp"
#include "test_util.hpp"

using namespace qmeas;

namespace {

// Kronecker product written out index by index.
COp kron_oracle(const COp& a, const COp& b) {
    const std::size_t n = a.dim();
    const std::size_t m = b.dim();
    Eigen::MatrixXcd out(static_cast<Eigen::Index>(n * m), static_cast<Eigen::Index>(n * m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < m; ++k)
                for (std::size_t l = 0; l < m; ++l)
                    out(static_cast<Eigen::Index>(i * m + k), static_cast<Eigen::Index>(j * m + l)) = a(i, j) * b(k, l);
    return COp(out);
}

}  // namespace

TEST(Kernel, TensorOpMatchesIndexOracle) {
    std::mt19937_64 rng(7);
    for (std::size_t n = 1; n <= 3; ++n)
        for (std::size_t m = 1; m <= 4; ++m) {
            const COp a(qtest::gaussian_matrix(rng, n, n));
            const COp b(qtest::gaussian_matrix(rng, m, m));
            EXPECT_EQ(tensor_op(a, b).max_abs_diff(kron_oracle(a, b)), 0.0) << n << "x" << m;
        }
}

TEST(Kernel, TensorVecIsColumnOfTensorOp) {
    std::mt19937_64 rng(8);
    const CVec a = qtest::random_unit(rng, 2);
    const CVec b = qtest::random_unit(rng, 3);
    const CVec ab = tensor_vec(a, b);
    ASSERT_EQ(ab.dim(), 6u);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(ab[i * 3 + k], a[i] * b[k]);
    // (A (x) B)(a (x) b) = Aa (x) Bb
    const COp A(qtest::gaussian_matrix(rng, 2, 2));
    const COp B(qtest::gaussian_matrix(rng, 3, 3));
    const CVec lhs = tensor_op(A, B).apply(ab);
    const CVec rhs = tensor_vec(A.apply(a), B.apply(b));
    EXPECT_LT((lhs - rhs).norm(), 1e-13);
}

TEST(Kernel, InnerIsConjugateLinearInFirstArgument) {
    const CVec a{Complex(0, 1), 0.0};
    const CVec b{1.0, 0.0};
    EXPECT_EQ(inner(a, b), Complex(0, -1));
    EXPECT_EQ(inner(b, a), Complex(0, 1));
}

TEST(Kernel, CommutatorOfProjectorPair) {
    const CVec e0 = CVec::basis(2, 0);
    const CVec plus = CVec{1.0, 1.0}.normalized();
    EXPECT_NEAR(commutator_norm(COp::projector(e0), COp::projector(plus)), 0.5, 1e-15);
    EXPECT_EQ(commutator_norm(COp::projector(e0), COp::projector(CVec::basis(2, 1))), 0.0);
}

TEST(Kernel, NormsAndPositivity) {
    const COp d = COp::diagonal(std::vector<Complex>{3.0, -5.0});
    EXPECT_NEAR(operator_norm(d), 5.0, 1e-14);
    EXPECT_NEAR(min_eigenvalue(d), -5.0, 1e-14);
    EXPECT_FALSE(is_positive(d, 1e-10));
    EXPECT_TRUE(is_positive(COp::diagonal(std::vector<Complex>{0.0, 2.0}), 1e-10));

    const COp skew(Eigen::MatrixXcd{{1.0, 1.0}, {0.0, 1.0}});
    EXPECT_NEAR(hermiticity_residual(skew), 1.0, 0.0);
    EXPECT_FALSE(is_positive(skew, 1e-10));
}

TEST(Kernel, RandomUnitaryAndNormProperties) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 3);
        const COp u = qtest::random_unitary(rng, n);
        EXPECT_LT(unitarity_residual(u), 1e-13);
        const CVec v = qtest::random_unit(rng, n);
        EXPECT_NEAR(u.apply(v).norm(), 1.0, 1e-13);
        const COp a(qtest::gaussian_matrix(rng, n, n));
        const COp b(qtest::gaussian_matrix(rng, n, n));
        EXPECT_LE(operator_norm(a * b), operator_norm(a) * operator_norm(b) * (1 + 1e-12));
        EXPECT_NEAR(operator_norm(u * a), operator_norm(a), 1e-12 * operator_norm(a));
        EXPECT_NEAR(commutator_norm(a, b), commutator_norm(b, a), 1e-12);
    }
}

TEST(Kernel, AdjointAndOuter) {
    const CVec a{1.0, Complex(0, 2)};
    const CVec b{Complex(3, 1), 0.5};
    const COp ab = COp::outer(a, b);
    EXPECT_EQ(ab(1, 0), a[1] * std::conj(b[0]));
    EXPECT_EQ(ab.adjoint().max_abs_diff(COp::outer(b, a)), 0.0);
    EXPECT_NEAR(std::abs(ab.trace() - inner(b, a)), 0.0, 1e-15);
}

TEST(Kernel, NonSquareOperatorRejected) {
    EXPECT_THROW(COp(Eigen::MatrixXcd::Zero(2, 3)), DimensionMismatch);
    const CVec a = CVec::basis(2, 0);
    EXPECT_THROW((void)COp::identity(3).apply(a), DimensionMismatch);
}
