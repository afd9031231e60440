#pragma once

// States, observables (POVMs, possibly sub-normalized), the probability rule,
// sampling, and the product / tensor / formal-product calculus.

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qmeas/kernel.hpp"

namespace qmeas {

/// Default tolerance for effect validation (positivity, E <= I, total <= I).
inline constexpr double kEffectTol = 1e-10;
/// Default operator-norm tolerance for the commutativity condition.
inline constexpr double kCommuteTol = 1e-10;

/// An outcome label: an integer tuple. Singletons print as "3", pairs as "(1,2)".
/// Products of observables concatenate tuples, so labels of realized trees are flat.
class Outcome {
public:
    Outcome() = default;
    Outcome(std::int64_t value) : parts_{value} {}  // NOLINT(google-explicit-constructor)
    Outcome(std::initializer_list<std::int64_t> parts) : parts_(parts) {}
    explicit Outcome(std::vector<std::int64_t> parts) : parts_(std::move(parts)) {}

    const std::vector<std::int64_t>& parts() const noexcept { return parts_; }
    std::string str() const;

    /// Concatenation (x, y) of two labels.
    static Outcome join(const Outcome& a, const Outcome& b);

    friend bool operator==(const Outcome&, const Outcome&) = default;
    friend auto operator<=>(const Outcome&, const Outcome&) = default;

private:
    std::vector<std::int64_t> parts_;
};

/// Unit vector u; the state is |u><u|.
class PureState {
public:
    explicit PureState(CVec vector);
    const CVec& vector() const noexcept { return v_; }
    std::size_t dim() const noexcept { return v_.dim(); }
    COp density() const { return COp::projector(v_); }

private:
    CVec v_;
};

/// Positive, trace-one operator.
class DensityOperator {
public:
    explicit DensityOperator(COp op);
    static DensityOperator from_pure(const PureState& s) { return DensityOperator(s.density()); }
    const COp& op() const noexcept { return rho_; }
    std::size_t dim() const noexcept { return rho_.dim(); }

private:
    COp rho_;
};

using State = std::variant<PureState, DensityOperator>;

/// A finite observable: ordered outcomes, one effect 0 <= E <= I each, with sum <= I.
/// The effect of an event (outcome subset) is the sum over its members; the empty event maps to 0.
class Povm {
public:
    const std::vector<Outcome>& outcomes() const noexcept { return outcomes_; }
    const std::vector<COp>& effects() const noexcept { return effects_; }
    std::size_t size() const noexcept { return outcomes_.size(); }
    std::size_t dim() const noexcept { return dim_; }

    const COp& effect(const Outcome& x) const;
    COp effect_of(const std::vector<Outcome>& event) const;
    std::size_t index_of(const Outcome& x) const;
    COp total() const;
    /// max |total - I|; zero for a normalized observable.
    double deficit_residual() const;

private:
    friend Povm make_povm(std::vector<Outcome>, std::vector<COp>, double);
    Povm() = default;

    std::vector<Outcome> outcomes_;
    std::vector<COp> effects_;
    std::size_t dim_ = 0;
};

/// Outcome-indexed operators with no positivity requirement (formal products).
class OperatorValuedMeasure {
public:
    OperatorValuedMeasure(std::vector<Outcome> outcomes, std::vector<COp> operators);

    const std::vector<Outcome>& outcomes() const noexcept { return outcomes_; }
    const std::vector<COp>& operators() const noexcept { return operators_; }
    std::size_t size() const noexcept { return outcomes_.size(); }
    std::size_t dim() const noexcept { return dim_; }

    const COp& op(const Outcome& x) const;
    COp op_of(const std::vector<Outcome>& event) const;

    /// Whether every operator is a valid effect and the total is <= I.
    bool is_povm(double tol = kEffectTol) const;
    /// Largest Hermiticity residual over all operators.
    double max_hermiticity_residual() const;

private:
    std::vector<Outcome> outcomes_;
    std::vector<COp> operators_;
    std::size_t dim_ = 0;
};

/// Outcome probabilities plus the mass for which no outcome is obtained.
class Pmf {
public:
    /// Validates each entry lies in [-tol, 1+tol], clamps into [0,1], and sets
    /// no_detection = 1 - sum (clamped at zero within tol).
    static Pmf from_probabilities(std::vector<Outcome> outcomes, std::vector<double> probabilities,
                                  double tol = kEffectTol);

    const std::vector<Outcome>& outcomes() const noexcept { return outcomes_; }
    const std::vector<double>& probabilities() const noexcept { return p_; }
    double no_detection() const noexcept { return none_; }
    std::size_t size() const noexcept { return p_.size(); }

    double at(const Outcome& x) const;
    double sum() const;

private:
    std::vector<Outcome> outcomes_;
    std::vector<double> p_;
    double none_ = 0.0;
};

/// Validating constructor.
/// Throws NotPositive when an effect fails 0 <= E, Overcomplete when E <= I or sum <= I fails,
/// DimensionMismatch on ragged dims, ValidationError on duplicate or missing labels.
Povm make_povm(std::vector<Outcome> outcomes, std::vector<COp> effects, double tol = kEffectTol);

/// Probability rule: p(x) = <u, F({x}) u> or tr(rho F({x})).
Pmf axiom1_pmf(const Povm& o, const State& s);
/// Expectation of one operator in a state (real part is the probability for effects).
Complex expectation(const COp& a, const State& s);

/// A single draw; nullopt is the no-detection outcome.
using Draw = std::optional<Outcome>;

/// I.i.d. inverse-CDF draws over outcomes in declared order, no-detection last.
/// Deterministic for a fixed seed.
std::vector<Draw> sample(const Povm& o, const State& s, std::size_t shots, std::uint64_t seed);
/// Same, from a precomputed pmf. Returned indices are positions in pmf.outcomes(),
/// with pmf.size() standing for no detection.
std::vector<std::size_t> sample_indices(const Pmf& pmf, std::size_t shots, std::uint64_t seed);

/// Commutativity gate: every pair of effects commutes within `tol` in operator norm.
bool commute(const Povm& a, const Povm& b, double tol = kCommuteTol);

/// Outcomes X_a x X_b, effects F_a({x}) F_b({y}). Throws NonCommuting (naming the pair) if the gate fails.
Povm product_observable(const Povm& a, const Povm& b, double tol = kCommuteTol);

/// Outcomes X_a x X_b, effects F_a({x}) (x) F_b({y}).
Povm tensor_observable(const Povm& a, const Povm& b);

/// Effects E -> by* E by, revalidated (sub-normalization allowed).
Povm conjugate_observable(const Povm& o, const COp& by);

/// F_a({x}) F_b({y}) with no commutativity requirement.
struct FormalProduct {
    OperatorValuedMeasure measure;
    /// True when the formal product is itself a valid observable.
    bool is_observable = false;
};
FormalProduct formal_product(const Povm& a, const Povm& b);

/// Slice of a formal product at a condition event C of the conditioning observable:
/// operators y -> sum_{c in C} G({c}) F({y}), and the normalizer sum_{c in C} G({c}).
struct ConditionedSlice {
    OperatorValuedMeasure slice;
    COp normalizer;
};
ConditionedSlice condition_on(const Povm& conditioning, const std::vector<Outcome>& condition, const Povm& inner);

/// Formal conditional values <u, A_y u> / <u, N u>. Complex in general; may leave [0,1].
/// Throws ZeroDenominator when |<u, N u>| <= 1e-14.
std::vector<Complex> conditional_formal_values(const OperatorValuedMeasure& slice, const COp& normalizer,
                                               const PureState& s);

inline std::vector<Complex> conditional_formal_values(const ConditionedSlice& c, const PureState& s) {
    return conditional_formal_values(c.slice, c.normalizer, s);
}

}  // namespace qmeas
