// Acceptance suite: one PASS/FAIL line per criterion. `acceptance` runs all ten,
// `acceptance N` runs criterion N only. Exit status is 0 only if every criterion run passes.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qmeas/causality.hpp"
#include "qmeas/emit.hpp"
#include "qmeas/errors.hpp"
#include "qmeas/measurement.hpp"
#include "qmeas/scenarios.hpp"
#include "test_util.hpp"

using namespace qmeas;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? " ok" : " FAILED");
    }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// Best of five calls after one warm-up, in milliseconds.
template <class F>
double best_ms(F&& f) {
    (void)f();
    double best = 1e300;
    for (int k = 0; k < 5; ++k) {
        const auto t0 = Clock::now();
        (void)f();
        best = std::min(best, std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
    }
    return best;
}

double max_err(const Pmf& p, const std::vector<double>& expected) {
    if (p.size() != expected.size()) return 1e300;
    double e = 0.0;
    for (std::size_t k = 0; k < expected.size(); ++k) e = std::max(e, std::abs(p.probabilities()[k] - expected[k]));
    return e;
}

// Brute-force Hardy oracle in the 4-dim product basis f_a (x) f_b, index 2a + b.
struct HardyOracle {
    std::vector<double> gg;
    std::vector<double> gf;
    std::vector<std::complex<double>> weak;
};

HardyOracle hardy_oracle() {
    const double h = 1.0 / std::sqrt(2.0);
    const Eigen::Vector2cd f[2] = {Eigen::Vector2cd(1, 0), Eigen::Vector2cd(0, 1)};
    const Eigen::Vector2cd g[2] = {Eigen::Vector2cd(h, h), Eigen::Vector2cd(h, -h)};
    auto kron = [](const Eigen::Vector2cd& a, const Eigen::Vector2cd& b) {
        Eigen::Vector4cd v;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) v(2 * i + j) = a(i) * b(j);
        return v;
    };
    const Eigen::Vector4cd psi = kron(g[0], g[0]);
    Eigen::Matrix4cd p = Eigen::Matrix4cd::Identity();
    p(0, 0) = 0.0;

    HardyOracle o;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const Eigen::Vector4cd vgg = p * kron(g[a], g[b]);
            const Eigen::Vector4cd vgf = p * kron(g[a], f[b]);
            o.gg.push_back(std::norm(vgg.dot(psi)));
            o.gf.push_back(std::norm(vgf.dot(psi)));
        }
    // Conditioned on P O_gg P = (2,2): <psi, E_c F_x psi> / <psi, E_c psi>.
    const Eigen::Vector4cd c = p * kron(g[1], g[1]);
    const Eigen::Matrix4cd ec = c * c.adjoint();
    const std::complex<double> denom = psi.dot(ec * psi);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const Eigen::Vector4cd v = kron(f[a], f[b]);
            const Eigen::Matrix4cd fx = v * v.adjoint();
            o.weak.push_back(psi.dot(ec * fx * psi) / denom);
        }
    return o;
}

Verdict criterion1() {
    Verdict v;
    const ScenarioResult r = run_wheeler();
    const double e1 = max_err(r.pmf("phi_O_f").pmf, {0.5, 0.5});
    const double e2 = max_err(r.pmf("phi2_O_g").pmf, {0.0, 1.0});
    v.require(e1 <= 1e-12, "first pmf err " + num(e1));
    v.require(e2 <= 1e-12, "second pmf err " + num(e2));
    const double ms = best_ms(run_wheeler);
    v.require(ms < 1.0, "runtime " + num(ms) + " ms");
    return v;
}

Verdict criterion2() {
    Verdict v;
    const HardyOracle o = hardy_oracle();
    const std::vector<double> expected{9.0 / 16, 1.0 / 16, 1.0 / 16, 1.0 / 16};
    double oracle_err = 0.0;
    for (std::size_t k = 0; k < 4; ++k) oracle_err = std::max(oracle_err, std::abs(o.gg[k] - expected[k]));
    v.require(oracle_err <= 1e-12, "oracle agrees");
    const ScenarioResult r = run_hardy();
    const Pmf& pmf = r.pmf("P_O_gg_P").pmf;
    const double e = max_err(pmf, expected);
    v.require(e <= 1e-12, "pmf err " + num(e));
    v.require(std::abs(pmf.no_detection() - 0.25) <= 1e-12, "no_detection " + num(pmf.no_detection()));
    const double ms = best_ms(run_hardy);
    v.require(ms < 1.0, "runtime " + num(ms) + " ms");
    return v;
}

Verdict criterion3() {
    Verdict v;
    const HardyOracle o = hardy_oracle();
    const std::vector<double> expected{1.0 / 8, 1.0 / 2, 1.0 / 8, 0.0};
    double oracle_err = 0.0;
    for (std::size_t k = 0; k < 4; ++k) oracle_err = std::max(oracle_err, std::abs(o.gf[k] - expected[k]));
    v.require(oracle_err <= 1e-12, "oracle agrees");
    const ScenarioResult r = run_hardy();
    const Pmf& pmf = r.pmf("P_O_gf_P").pmf;
    const double e = max_err(pmf, expected);
    v.require(e <= 1e-12, "pmf err " + num(e));
    v.require(std::abs(pmf.no_detection() - 0.25) <= 1e-12, "no_detection " + num(pmf.no_detection()));
    return v;
}

Verdict criterion4() {
    Verdict v;
    const HardyOracle o = hardy_oracle();
    const std::vector<double> expected{0.0, 1.0, 1.0, -1.0};
    const ScenarioResult r = run_hardy();
    const auto& w = r.weak("O_ff_given_P_O_gg_P_eq_(2,2)").values;
    double re = 0.0, im = 0.0, oracle_err = 0.0;
    for (std::size_t k = 0; k < std::min<std::size_t>(4, w.size()); ++k) {
        re = std::max(re, std::abs(w[k].real() - expected[k]));
        im = std::max(im, std::abs(w[k].imag()));
        oracle_err = std::max(oracle_err, std::abs(o.weak[k] - std::complex<double>(expected[k], 0.0)));
    }
    v.require(w.size() == 4, "four values");
    v.require(oracle_err <= 1e-12, "oracle agrees");
    v.require(re <= 1e-12, "real err " + num(re));
    v.require(im <= 1e-10, "imag err " + num(im));
    return v;
}

Verdict criterion5() {
    Verdict v;
    const ScenarioResult r = run_three_boxes();
    const double p1 = r.pmf("O_1").pmf.at(1);
    v.require(std::abs(p1 - 1.0 / 9) <= 1e-12, "P(G=1) " + num(p1));
    const double e2 = max_err(r.pmf("O_2").pmf, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    v.require(e2 <= 1e-12, "O_2 err " + num(e2));
    const std::vector<double> expected{1.0, 1.0, -1.0};
    const auto& w = r.weak("O_2_given_O_1_eq_1").values;
    double ew = w.size() == 3 ? 0.0 : 1e300;
    for (std::size_t k = 0; k < std::min<std::size_t>(3, w.size()); ++k)
        ew = std::max(ew, std::abs(w[k] - std::complex<double>(expected[k], 0.0)));
    v.require(ew <= 1e-12, "conditional values err " + num(ew));

    const double s3 = 1.0 / std::sqrt(3.0);
    const COp pg = COp::projector(CVec{s3, s3, -s3});
    const Povm o1 = make_povm({1, 2}, {pg, COp::identity(3) - pg});
    const Povm o2 = make_povm({1, 2, 3}, {COp::projector(CVec::basis(3, 0)), COp::projector(CVec::basis(3, 1)),
                                          COp::projector(CVec::basis(3, 2))});
    bool raised = false;
    try {
        (void)product_observable(o1, o2);
    } catch (const NonCommuting&) {
        raised = true;
    }
    v.require(raised, "product refused");
    return v;
}

Verdict criterion6() {
    Verdict v;
    const auto t0 = Clock::now();
    const Povm ox = which_path_x();
    const double id_res = (ox.effect(1) + ox.effect(-1)).max_abs_diff(COp::identity(2));
    v.require(id_res <= 1e-12, "F_x({1}) + F_x({-1}) = I residual " + num(id_res));

    std::mt19937_64 rng(20240917);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 2 + static_cast<std::size_t>(t % 3);
        const CVec a = qtest::random_unit(rng, 2);
        const COp basis = qtest::random_unitary(rng, n);
        EraserSpec spec;
        spec.alpha1 = a[0];
        spec.alpha2 = a[1];
        spec.u1 = CVec(basis.eigen().col(0));
        spec.u2 = CVec(basis.eigen().col(1));
        spec.inner = qtest::random_povm(rng, n, 2 + static_cast<std::size_t>(t % 4));
        const ScenarioResult r = run_eraser(spec);
        const auto& s1 = r.pmf("existence_x_inner").pmf.probabilities();
        const auto& s2 = r.pmf("x_plus_slice").pmf.probabilities();
        const auto& s3 = r.pmf("x_minus_slice").pmf.probabilities();
        for (std::size_t k = 0; k < s1.size(); ++k) worst = std::max(worst, std::abs(s1[k] - s2[k] - s3[k]));
    }
    v.require(worst <= 1e-12, "100 random instances max residual " + num(worst));
    const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    v.require(ms < 1000.0, "runtime " + num(ms) + " ms");
    return v;
}

Verdict criterion7() {
    Verdict v;
    constexpr int kN = 100;
    constexpr double kTol = 1e-10;
    std::mt19937_64 rng(7);
    double hs = 0.0, marg = 0.0, coincide = 0.0, cond = 0.0;
    for (int t = 0; t < kN; ++t) {
        const std::size_t n = 2 + static_cast<std::size_t>(t % 3);

        const Povm o = qtest::random_povm(rng, n, 3);
        const COp u = qtest::random_unitary(rng, n);
        const CVec x = qtest::random_unit(rng, n);
        const Pmf heis = axiom1_pmf(conjugate_observable(o, u), PureState(x));
        const Pmf schr = axiom1_pmf(o, PureState(u.apply(x)));
        for (std::size_t k = 0; k < o.size(); ++k)
            hs = std::max(hs, std::abs(heis.probabilities()[k] - schr.probabilities()[k]));

        const COp basis = qtest::random_unitary(rng, n);
        const Povm a = qtest::diagonal_in(basis, 2);
        const Povm b = qtest::diagonal_in(basis, n);
        const PureState s(qtest::random_unit(rng, n));
        const Pmf joint = axiom1_pmf(product_observable(a, b), s);
        const Pmf pa = axiom1_pmf(a, s);
        for (const auto& xa : a.outcomes()) {
            double m = 0.0;
            for (const auto& yb : b.outcomes()) m += joint.at(Outcome::join(xa, yb));
            marg = std::max(marg, std::abs(m - pa.at(xa)));
        }
        const Povm prod = product_observable(a, b);
        const FormalProduct formal = formal_product(a, b);
        for (std::size_t k = 0; k < prod.size(); ++k)
            coincide = std::max(coincide, formal.measure.operators()[k].max_abs_diff(prod.effects()[k]));

        const Povm g = qtest::random_povm(rng, n, 3);
        const Povm f = qtest::random_povm(rng, n, 3);
        Complex sum = 0.0;
        for (const auto& z : conditional_formal_values(condition_on(g, {Outcome{2}}, f), s)) sum += z;
        cond = std::max(cond, std::abs(sum - Complex(1.0, 0.0)));
    }
    v.require(hs <= kTol, "Heisenberg/Schrodinger " + num(hs));
    v.require(marg <= kTol, "marginal " + num(marg));
    v.require(coincide <= kTol, "formal = product " + num(coincide));
    v.require(cond <= kTol, "conditional normalization " + num(cond));
    return v;
}

Verdict criterion8() {
    Verdict v;
    auto diag_obs = [](std::vector<std::vector<double>> w) {
        std::vector<Outcome> outs;
        std::vector<COp> effs;
        for (std::size_t k = 0; k < w.size(); ++k) {
            outs.emplace_back(static_cast<std::int64_t>(k + 1));
            effs.push_back(COp::diagonal(std::vector<Complex>(w[k].begin(), w[k].end())));
        }
        return make_povm(outs, effs);
    };
    auto phases = [](std::vector<double> a) {
        std::vector<Complex> d;
        for (const double x : a) d.push_back(std::polar(1.0, x));
        return COp::diagonal(d);
    };
    const std::vector<std::vector<double>> ws{{1.0, 0.0, 0.5}, {0.0, 1.0, 0.5}};
    const std::vector<std::vector<double>> wt{{0.2, 0.7, 1.0}, {0.8, 0.3, 0.0}};
    const std::vector<std::vector<double>> ww{{1.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
    CausalTree tree("s", 3, diag_obs(ws));
    tree.add_node("t", CausalMap("s", "t", phases({0.3, 1.1, -0.4})), diag_obs(wt));
    tree.add_node("w", CausalMap("t", "w", phases({2.0, -0.7, 0.9})), diag_obs(ww));
    const Povm r = realize_sequential(tree);
    // Diagonal effects under phase conjugation stay put, so the realized effect is the entrywise product.
    double err = r.size() == 8 ? 0.0 : 1e300;
    for (std::int64_t x = 1; x <= 2; ++x)
        for (std::int64_t y = 1; y <= 2; ++y)
            for (std::int64_t z = 1; z <= 2; ++z) {
                Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(3, 3);
                for (int i = 0; i < 3; ++i)
                    expected(i, i) = ws[static_cast<std::size_t>(x - 1)][static_cast<std::size_t>(i)] *
                                     wt[static_cast<std::size_t>(y - 1)][static_cast<std::size_t>(i)] *
                                     ww[static_cast<std::size_t>(z - 1)][static_cast<std::size_t>(i)];
                err = std::max(err, r.effect(Outcome{x, y, z}).max_abs_diff(COp(expected)));
            }
    v.require(err <= 1e-12, "3-node chain err " + num(err));

    std::string pair = "none";
    try {
        (void)realize_sequential(noncommuting_surrogate_tree());
    } catch (const NonCommuting& e) {
        pair = e.first() + "," + e.second();
    }
    v.require(pair == "branch1,branch2", "surrogate refused (pair " + pair + ")");
    return v;
}

Verdict criterion9() {
    Verdict v;
    const auto t0 = Clock::now();
    const auto rep = doubleslit::simulate(doubleslit::DoubleSlitConfig{});
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const auto& b1 = *rep.branch1;
    const auto& b2 = *rep.branch2;

    const double drift = std::max(b1.norm_drift, b2.norm_drift);
    v.require(drift <= 1e-4, "(a) norm drift " + num(drift));
    v.require(rep.momentum_rel_error <= 0.02, "(b) momentum rel err " + num(rep.momentum_rel_error));
    v.require(rep.oracle_tv && *rep.oracle_tv <= 1e-3, "(c) superposition TV " + num(rep.oracle_tv.value_or(1e300)));
    const double gap = b1.visibility - b2.visibility;
    v.require(gap > doubleslit::kVisibilityMargin, "(d) V1 " + num(b1.visibility) + " - V2 " + num(b2.visibility) +
                                                       " = " + num(gap) + " > " + num(doubleslit::kVisibilityMargin));
    const double z = std::max(doubleslit::max_binomial_z(b1.pmf, b1.histogram),
                              doubleslit::max_binomial_z(b2.pmf, b2.histogram));
    v.require(z <= 3.0 && b1.histogram.shots() == 100000, "(e) max shot z " + num(z));
    v.require(secs <= 300.0, "runtime " + num(secs) + " s");
    return v;
}

Verdict criterion10() {
    Verdict v;
    const std::vector<std::pair<std::string, std::function<ScenarioResult()>>> all{
        {"eraser", [] { return run_eraser(); }},
        {"wheeler", run_wheeler},
        {"hardy", run_hardy},
        {"three-boxes", run_three_boxes},
        {"doubleslit", [] { return doubleslit::run_doubleslit(); }},
    };
    for (const auto& [name, run] : all) {
        const ScenarioResult a = run();
        const ScenarioResult b = run();
        const bool same = render(a, Format::json) == render(b, Format::json) &&
                          render(a, Format::csv) == render(b, Format::csv);
        v.require(same, name);
    }
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    const std::map<int, std::function<Verdict()>> criteria{
        {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4}, {5, criterion5},
        {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}, {10, criterion10},
    };
    std::vector<int> chosen;
    for (int k = 1; k < argc; ++k) chosen.push_back(std::atoi(argv[k]));
    if (chosen.empty())
        for (const auto& [n, _] : criteria) chosen.push_back(n);

    bool all = true;
    for (const int n : chosen) {
        const auto it = criteria.find(n);
        if (it == criteria.end()) {
            std::fprintf(stderr, "unknown criterion %d\n", n);
            return 2;
        }
        Verdict v;
        try {
            v = it->second();
        } catch (const std::exception& e) {
            v.require(false, std::string("exception: ") + e.what());
        }
        all = all && v.pass;
        std::printf("%s criterion %d: %s\n", v.pass ? "PASS" : "FAIL", n, v.detail.str().c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
