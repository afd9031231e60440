#include "qmeas/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "qmeas/errors.hpp"

namespace qmeas {

namespace {

constexpr double kUnitTol = 1e-12;
constexpr double kDensityTol = 1e-10;
constexpr double kDenominatorFloor = 1e-14;

std::size_t find_outcome(const std::vector<Outcome>& outcomes, const Outcome& x) {
    const auto it = std::find(outcomes.begin(), outcomes.end(), x);
    if (it == outcomes.end()) throw ValidationError("unknown outcome " + x.str());
    return static_cast<std::size_t>(it - outcomes.begin());
}

void require_unique(const std::vector<Outcome>& outcomes) {
    std::set<Outcome> seen;
    for (const auto& x : outcomes)
        if (!seen.insert(x).second) throw ValidationError("duplicate outcome label " + x.str());
}

std::size_t state_dim(const State& s) {
    return std::visit([](const auto& st) { return st.dim(); }, s);
}

// 53 random bits mapped onto [0, 1).
double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

std::string Outcome::str() const {
    if (parts_.size() == 1) return std::to_string(parts_.front());
    std::string s = "(";
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(parts_[i]);
    }
    return s + ")";
}

Outcome Outcome::join(const Outcome& a, const Outcome& b) {
    std::vector<std::int64_t> parts = a.parts_;
    parts.insert(parts.end(), b.parts_.begin(), b.parts_.end());
    return Outcome(std::move(parts));
}

PureState::PureState(CVec vector) : v_(std::move(vector)) {
    if (v_.dim() == 0) throw ValidationError("PureState: empty vector");
    if (std::abs(v_.norm() - 1.0) > kUnitTol)
        throw ValidationError("PureState: vector norm " + std::to_string(v_.norm()) + " is not 1");
}

DensityOperator::DensityOperator(COp op) : rho_(std::move(op)) {
    if (rho_.dim() == 0) throw ValidationError("DensityOperator: empty operator");
    if (!is_positive(rho_, kDensityTol)) throw NotPositive("DensityOperator: not Hermitian positive");
    if (std::abs(rho_.trace() - Complex(1.0)) > kDensityTol) throw ValidationError("DensityOperator: trace is not 1");
}

// --- Povm -----------------------------------------------------------------

std::size_t Povm::index_of(const Outcome& x) const { return find_outcome(outcomes_, x); }

const COp& Povm::effect(const Outcome& x) const { return effects_[index_of(x)]; }

COp Povm::effect_of(const std::vector<Outcome>& event) const {
    COp sum = COp::zero(dim_);
    std::set<Outcome> seen;
    for (const auto& x : event)
        if (seen.insert(x).second) sum = sum + effect(x);
    return sum;
}

COp Povm::total() const {
    COp sum = COp::zero(dim_);
    for (const auto& e : effects_) sum = sum + e;
    return sum;
}

double Povm::deficit_residual() const { return total().max_abs_diff(COp::identity(dim_)); }

Povm make_povm(std::vector<Outcome> outcomes, std::vector<COp> effects, double tol) {
    if (outcomes.size() != effects.size())
        throw ValidationError("make_povm: " + std::to_string(outcomes.size()) + " outcomes but " +
                              std::to_string(effects.size()) + " effects");
    if (outcomes.empty()) throw ValidationError("make_povm: empty outcome set");
    require_unique(outcomes);

    const std::size_t dim = effects.front().dim();
    for (const auto& e : effects)
        if (e.dim() != dim) throw DimensionMismatch(dim, e.dim(), "make_povm");

    const COp identity = COp::identity(dim);
    COp total = COp::zero(dim);
    for (std::size_t i = 0; i < effects.size(); ++i) {
        if (!is_positive(effects[i], tol))
            throw NotPositive("make_povm: effect for outcome " + outcomes[i].str() + " is not positive");
        if (!is_positive(identity - effects[i], tol))
            throw Overcomplete("make_povm: effect for outcome " + outcomes[i].str() + " exceeds the identity");
        total = total + effects[i];
    }
    if (!is_positive(identity - total, tol)) throw Overcomplete("make_povm: sum of effects exceeds the identity");

    Povm o;
    o.outcomes_ = std::move(outcomes);
    o.effects_ = std::move(effects);
    o.dim_ = dim;
    return o;
}

// --- OperatorValuedMeasure -------------------------------------------------

OperatorValuedMeasure::OperatorValuedMeasure(std::vector<Outcome> outcomes, std::vector<COp> operators)
    : outcomes_(std::move(outcomes)), operators_(std::move(operators)) {
    if (outcomes_.size() != operators_.size())
        throw ValidationError("OperatorValuedMeasure: label/operator count mismatch");
    if (outcomes_.empty()) throw ValidationError("OperatorValuedMeasure: empty outcome set");
    require_unique(outcomes_);
    dim_ = operators_.front().dim();
    for (const auto& a : operators_)
        if (a.dim() != dim_) throw DimensionMismatch(dim_, a.dim(), "OperatorValuedMeasure");
}

const COp& OperatorValuedMeasure::op(const Outcome& x) const { return operators_[find_outcome(outcomes_, x)]; }

COp OperatorValuedMeasure::op_of(const std::vector<Outcome>& event) const {
    COp sum = COp::zero(dim_);
    std::set<Outcome> seen;
    for (const auto& x : event)
        if (seen.insert(x).second) sum = sum + op(x);
    return sum;
}

bool OperatorValuedMeasure::is_povm(double tol) const {
    try {
        (void)make_povm(outcomes_, operators_, tol);
        return true;
    } catch (const ValidationError&) {
        return false;
    }
}

double OperatorValuedMeasure::max_hermiticity_residual() const {
    double r = 0.0;
    for (const auto& a : operators_) r = std::max(r, hermiticity_residual(a));
    return r;
}

// --- Pmf -----------------------------------------------------------------

Pmf Pmf::from_probabilities(std::vector<Outcome> outcomes, std::vector<double> probabilities, double tol) {
    if (outcomes.size() != probabilities.size()) throw ValidationError("Pmf: label/probability count mismatch");
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        double& p = probabilities[i];
        if (!std::isfinite(p) || p < -tol || p > 1.0 + tol)
            throw NumericError("Pmf: probability " + std::to_string(p) + " for outcome " + outcomes[i].str() +
                               " is outside [0,1]");
        p = std::clamp(p, 0.0, 1.0);
    }
    const double total = std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
    double none = 1.0 - total;
    if (none < -tol) throw NumericError("Pmf: probabilities sum to " + std::to_string(total) + " > 1");
    if (none < 0.0) none = 0.0;

    Pmf pmf;
    pmf.outcomes_ = std::move(outcomes);
    pmf.p_ = std::move(probabilities);
    pmf.none_ = none;
    return pmf;
}

double Pmf::at(const Outcome& x) const { return p_[find_outcome(outcomes_, x)]; }

double Pmf::sum() const { return std::accumulate(p_.begin(), p_.end(), 0.0); }

// --- probability rule and sampling ------------------------------------------

Complex expectation(const COp& a, const State& s) {
    return std::visit(
        [&](const auto& st) -> Complex {
            using T = std::decay_t<decltype(st)>;
            if (a.dim() != st.dim()) throw DimensionMismatch(a.dim(), st.dim(), "expectation");
            if constexpr (std::is_same_v<T, PureState>) {
                return inner(st.vector(), a.apply(st.vector()));
            } else {
                return (st.op() * a).trace();
            }
        },
        s);
}

Pmf axiom1_pmf(const Povm& o, const State& s) {
    if (o.dim() != state_dim(s)) throw DimensionMismatch(o.dim(), state_dim(s), "axiom1_pmf");
    std::vector<double> p;
    p.reserve(o.size());
    for (const auto& e : o.effects()) p.push_back(expectation(e, s).real());
    return Pmf::from_probabilities(o.outcomes(), std::move(p));
}

std::vector<std::size_t> sample_indices(const Pmf& pmf, std::size_t shots, std::uint64_t seed) {
    std::vector<double> cdf(pmf.size());
    std::partial_sum(pmf.probabilities().begin(), pmf.probabilities().end(), cdf.begin());

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> draws;
    draws.reserve(shots);
    for (std::size_t k = 0; k < shots; ++k) {
        const double r = unit_draw(rng);
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), r);
        draws.push_back(static_cast<std::size_t>(it - cdf.begin()));  // == size() means no detection
    }
    return draws;
}

std::vector<Draw> sample(const Povm& o, const State& s, std::size_t shots, std::uint64_t seed) {
    const Pmf pmf = axiom1_pmf(o, s);
    std::vector<Draw> out;
    out.reserve(shots);
    for (const auto idx : sample_indices(pmf, shots, seed)) {
        if (idx < pmf.size())
            out.emplace_back(pmf.outcomes()[idx]);
        else
            out.emplace_back(std::nullopt);
    }
    return out;
}

// --- observable calculus ---------------------------------------------------

bool commute(const Povm& a, const Povm& b, double tol) {
    if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim(), "commute");
    for (const auto& ea : a.effects())
        for (const auto& eb : b.effects())
            if (commutator_norm(ea, eb) > tol) return false;
    return true;
}

Povm product_observable(const Povm& a, const Povm& b, double tol) {
    if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim(), "product_observable");
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) {
            const double c = commutator_norm(a.effects()[i], b.effects()[j]);
            if (c > tol) throw NonCommuting("a:" + a.outcomes()[i].str(), "b:" + b.outcomes()[j].str(), c);
        }

    std::vector<Outcome> outcomes;
    std::vector<COp> effects;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) {
            outcomes.push_back(Outcome::join(a.outcomes()[i], b.outcomes()[j]));
            effects.push_back(a.effects()[i] * b.effects()[j]);
        }
    return make_povm(std::move(outcomes), std::move(effects));
}

Povm tensor_observable(const Povm& a, const Povm& b) {
    std::vector<Outcome> outcomes;
    std::vector<COp> effects;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) {
            outcomes.push_back(Outcome::join(a.outcomes()[i], b.outcomes()[j]));
            effects.push_back(tensor_op(a.effects()[i], b.effects()[j]));
        }
    return make_povm(std::move(outcomes), std::move(effects));
}

Povm conjugate_observable(const Povm& o, const COp& by) {
    if (by.dim() != o.dim()) throw DimensionMismatch(o.dim(), by.dim(), "conjugate_observable");
    const COp by_adj = by.adjoint();
    std::vector<COp> effects;
    effects.reserve(o.size());
    for (const auto& e : o.effects()) effects.push_back(by_adj * e * by);
    return make_povm(o.outcomes(), std::move(effects));
}

FormalProduct formal_product(const Povm& a, const Povm& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim(), "formal_product");
    std::vector<Outcome> outcomes;
    std::vector<COp> ops;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) {
            outcomes.push_back(Outcome::join(a.outcomes()[i], b.outcomes()[j]));
            ops.push_back(a.effects()[i] * b.effects()[j]);
        }
    OperatorValuedMeasure m(std::move(outcomes), std::move(ops));
    const bool ok = m.is_povm();
    return FormalProduct{std::move(m), ok};
}

ConditionedSlice condition_on(const Povm& conditioning, const std::vector<Outcome>& condition, const Povm& inner) {
    if (conditioning.dim() != inner.dim()) throw DimensionMismatch(conditioning.dim(), inner.dim(), "condition_on");
    if (condition.empty()) throw ValidationError("condition_on: empty condition event");
    const COp g = conditioning.effect_of(condition);
    std::vector<COp> ops;
    ops.reserve(inner.size());
    for (const auto& f : inner.effects()) ops.push_back(g * f);
    return ConditionedSlice{OperatorValuedMeasure(inner.outcomes(), std::move(ops)), g};
}

std::vector<Complex> conditional_formal_values(const OperatorValuedMeasure& slice, const COp& normalizer,
                                               const PureState& s) {
    if (slice.dim() != s.dim()) throw DimensionMismatch(slice.dim(), s.dim(), "conditional_formal_values");
    if (normalizer.dim() != s.dim())
        throw DimensionMismatch(normalizer.dim(), s.dim(), "conditional_formal_values normalizer");
    const Complex den = inner(s.vector(), normalizer.apply(s.vector()));
    if (std::abs(den) <= kDenominatorFloor)
        throw ZeroDenominator("conditional_formal_values: the condition has zero probability");
    std::vector<Complex> values;
    values.reserve(slice.size());
    for (const auto& a : slice.operators()) values.push_back(inner(s.vector(), a.apply(s.vector())) / den);
    return values;
}

}  // namespace qmeas
