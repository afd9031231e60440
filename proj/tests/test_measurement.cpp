#include <gtest/gtest.h>

#include <map>

#include "qmeas/errors.hpp"
#include "qmeas/measurement.hpp"
#include "test_util.hpp"

using namespace qmeas;

namespace {

constexpr double kTol = 1e-10;
constexpr int kInstances = 120;

std::size_t dim_for(int trial) { return 2 + static_cast<std::size_t>(trial % 3); }

Povm binary_projective(const CVec& v) {
    const COp p = COp::projector(v);
    return make_povm({1, 2}, {p, COp::identity(v.dim()) - p});
}

}  // namespace

TEST(Outcome, Labels) {
    EXPECT_EQ(Outcome(3).str(), "3");
    EXPECT_EQ((Outcome{1, 2}).str(), "(1,2)");
    EXPECT_EQ(Outcome::join(Outcome{1, 2}, -4).str(), "(1,2,-4)");
    EXPECT_LT(Outcome(-1), Outcome(1));
}

TEST(States, Validation) {
    EXPECT_THROW(PureState(CVec{1.0, 1.0}), ValidationError);
    EXPECT_NO_THROW(PureState(CVec{1.0, 1.0}.normalized()));
    EXPECT_THROW(DensityOperator(COp::diagonal(std::vector<Complex>{1.5, -0.5})), ValidationError);
    EXPECT_THROW(DensityOperator(COp::diagonal(std::vector<Complex>{0.5, 0.25})), ValidationError);
}

TEST(Povm, ValidatesEffects) {
    const COp half = 0.5 * COp::identity(2);
    EXPECT_NO_THROW(make_povm({1, 2}, {half, half}));
    // Sub-normalized observables are allowed.
    EXPECT_NO_THROW(make_povm({1}, {half}));
    EXPECT_THROW(make_povm({1}, {COp::diagonal(std::vector<Complex>{-0.1, 0.5})}), NotPositive);
    EXPECT_THROW(make_povm({1}, {2.0 * COp::identity(2)}), Overcomplete);
    EXPECT_THROW(make_povm({1, 2}, {COp::identity(2), half}), Overcomplete);
    EXPECT_THROW(make_povm({1, 1}, {half, half}), ValidationError);
    EXPECT_THROW(make_povm({1, 2}, {half, 0.5 * COp::identity(3)}), DimensionMismatch);
}

TEST(Povm, EventEffectsAreSums) {
    std::mt19937_64 rng(3);
    const Povm o = qtest::random_povm(rng, 3, 4);
    EXPECT_LT(o.effect_of({1, 3}).max_abs_diff(o.effect(1) + o.effect(3)), 1e-15);
    EXPECT_EQ(o.effect_of({}).max_abs_diff(COp::zero(3)), 0.0);
    EXPECT_LT(o.deficit_residual(), 1e-12);
}

TEST(Pmf, NoDetectionMassForSubNormalized) {
    const CVec u = CVec{1.0, 1.0}.normalized();
    const Povm o = make_povm({1}, {COp::projector(CVec::basis(2, 0))});
    const Pmf p = axiom1_pmf(o, PureState(u));
    EXPECT_NEAR(p.at(1), 0.5, 1e-15);
    EXPECT_NEAR(p.no_detection(), 0.5, 1e-15);
    EXPECT_THROW(Pmf::from_probabilities({1}, {1.5}), NumericError);
}

TEST(Axiom1, PureAndDensityAgree) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < kInstances; ++t) {
        const std::size_t n = dim_for(t);
        const Povm o = qtest::random_povm(rng, n, 3);
        const PureState s(qtest::random_unit(rng, n));
        const Pmf a = axiom1_pmf(o, s);
        const Pmf b = axiom1_pmf(o, DensityOperator::from_pure(s));
        for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a.probabilities()[k], b.probabilities()[k], kTol);
        EXPECT_NEAR(a.sum() + a.no_detection(), 1.0, kTol);
    }
}

TEST(Axiom1, HeisenbergSchrodingerAgreement) {
    std::mt19937_64 rng(17);
    for (int t = 0; t < kInstances; ++t) {
        const std::size_t n = dim_for(t);
        const Povm o = qtest::random_povm(rng, n, 2 + static_cast<std::size_t>(t % 3));
        const COp u = qtest::random_unitary(rng, n);
        const CVec v = qtest::random_unit(rng, n);
        // <v, U* F U v> against <Uv, F Uv>
        const Pmf heis = axiom1_pmf(conjugate_observable(o, u), PureState(v));
        const Pmf schr = axiom1_pmf(o, PureState(u.apply(v)));
        for (std::size_t k = 0; k < heis.size(); ++k) EXPECT_NEAR(heis.probabilities()[k], schr.probabilities()[k], kTol);

        const COp rho = qtest::random_density(rng, n);
        const Pmf heis_mixed = axiom1_pmf(conjugate_observable(o, u), DensityOperator(rho));
        const Pmf schr_mixed = axiom1_pmf(o, DensityOperator(u * rho * u.adjoint()));
        for (std::size_t k = 0; k < heis.size(); ++k)
            EXPECT_NEAR(heis_mixed.probabilities()[k], schr_mixed.probabilities()[k], kTol);
    }
}

TEST(Product, MarginalProperty) {
    std::mt19937_64 rng(23);
    for (int t = 0; t < kInstances; ++t) {
        const std::size_t n = dim_for(t);
        const COp basis = qtest::random_unitary(rng, n);
        const Povm a = qtest::diagonal_in(basis, 2);
        const Povm b = qtest::diagonal_in(basis, n);
        const Povm ab = product_observable(a, b);
        const PureState s(qtest::random_unit(rng, n));
        const Pmf joint = axiom1_pmf(ab, s);
        const Pmf pa = axiom1_pmf(a, s);
        const Pmf pb = axiom1_pmf(b, s);
        for (const auto& x : a.outcomes()) {
            double m = 0.0;
            for (const auto& y : b.outcomes()) m += joint.at(Outcome::join(x, y));
            EXPECT_NEAR(m, pa.at(x), kTol);
        }
        for (const auto& y : b.outcomes()) {
            double m = 0.0;
            for (const auto& x : a.outcomes()) m += joint.at(Outcome::join(x, y));
            EXPECT_NEAR(m, pb.at(y), kTol);
        }
    }
}

TEST(Product, FormalProductCoincidesUnderCommutation) {
    std::mt19937_64 rng(29);
    for (int t = 0; t < kInstances; ++t) {
        const std::size_t n = dim_for(t);
        const COp basis = qtest::random_unitary(rng, n);
        const Povm a = qtest::diagonal_in(basis, 2);
        const Povm b = qtest::diagonal_in(basis, n);
        ASSERT_TRUE(commute(a, b));
        const Povm prod = product_observable(a, b);
        const FormalProduct formal = formal_product(a, b);
        EXPECT_TRUE(formal.is_observable);
        ASSERT_EQ(formal.measure.outcomes(), prod.outcomes());
        for (std::size_t k = 0; k < prod.size(); ++k)
            EXPECT_LT(formal.measure.operators()[k].max_abs_diff(prod.effects()[k]), kTol);
    }
}

TEST(Product, NonCommutingPairIsRefused) {
    const Povm z = binary_projective(CVec::basis(2, 0));
    const Povm x = binary_projective(CVec{1.0, 1.0}.normalized());
    EXPECT_FALSE(commute(z, x));
    try {
        (void)product_observable(z, x);
        FAIL() << "expected NonCommuting";
    } catch (const NonCommuting& e) {
        EXPECT_EQ(e.first(), "a:1");
        EXPECT_EQ(e.second(), "b:1");
        EXPECT_NEAR(e.commutator(), 0.5, 1e-12);
    }
    const FormalProduct f = formal_product(z, x);
    EXPECT_FALSE(f.is_observable);
    EXPECT_GT(f.measure.max_hermiticity_residual(), 0.1);
}

TEST(Tensor, LabelsAndMarginals) {
    std::mt19937_64 rng(31);
    const Povm a = qtest::random_povm(rng, 2, 2);
    const Povm b = qtest::random_povm(rng, 3, 3);
    const Povm ab = tensor_observable(a, b);
    ASSERT_EQ(ab.size(), 6u);
    EXPECT_EQ(ab.outcomes()[4], (Outcome{2, 2}));
    EXPECT_EQ(ab.dim(), 6u);
    const CVec u = qtest::random_unit(rng, 2);
    const CVec v = qtest::random_unit(rng, 3);
    const Pmf joint = axiom1_pmf(ab, PureState(tensor_vec(u, v)));
    const Pmf pa = axiom1_pmf(a, PureState(u));
    const Pmf pb = axiom1_pmf(b, PureState(v));
    for (const auto& x : a.outcomes())
        for (const auto& y : b.outcomes()) EXPECT_NEAR(joint.at(Outcome::join(x, y)), pa.at(x) * pb.at(y), 1e-12);
}

TEST(Conditional, NormalizationWithCompleteInner) {
    std::mt19937_64 rng(37);
    for (int t = 0; t < kInstances; ++t) {
        const std::size_t n = dim_for(t);
        const Povm g = qtest::random_povm(rng, n, 3);
        const Povm f = qtest::random_povm(rng, n, 2 + static_cast<std::size_t>(t % 3));
        const PureState s(qtest::random_unit(rng, n));
        const auto slice = condition_on(g, {Outcome{1}, Outcome{3}}, f);
        EXPECT_LT(slice.normalizer.max_abs_diff(g.effect(1) + g.effect(3)), 1e-14);
        const auto values = conditional_formal_values(slice, s);
        Complex sum = 0.0;
        for (const auto& v : values) sum += v;
        EXPECT_NEAR(sum.real(), 1.0, kTol);
        EXPECT_NEAR(sum.imag(), 0.0, kTol);
    }
}

TEST(Conditional, ZeroDenominator) {
    const Povm g = binary_projective(CVec::basis(2, 0));
    const Povm f = binary_projective(CVec{1.0, 1.0}.normalized());
    const PureState s(CVec::basis(2, 1));
    EXPECT_THROW((void)conditional_formal_values(condition_on(g, {Outcome{1}}, f), s), ZeroDenominator);
}

TEST(Sampling, DeterministicAndConsistent) {
    std::mt19937_64 rng(41);
    const Povm o = make_povm({1, 2}, {0.25 * COp::identity(2), 0.5 * COp::identity(2)});
    const PureState s(qtest::random_unit(rng, 2));
    const auto a = sample(o, s, 20000, 99);
    const auto b = sample(o, s, 20000, 99);
    EXPECT_EQ(a, b);
    std::map<std::string, int> counts;
    for (const auto& d : a) counts[d ? d->str() : "none"]++;
    EXPECT_NEAR(counts["1"] / 20000.0, 0.25, 0.015);
    EXPECT_NEAR(counts["2"] / 20000.0, 0.5, 0.015);
    EXPECT_NEAR(counts["none"] / 20000.0, 0.25, 0.015);
    EXPECT_NE(sample(o, s, 200, 1), sample(o, s, 200, 2));
}
