#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "qmeas/errors.hpp"
#include "qmeas/scenarios.hpp"

namespace qmeas::doubleslit {

namespace {

using nlohmann::json;

constexpr double kNormDriftTol = 1e-4;
constexpr double kMomentumTol = 0.02;
constexpr double kOracleTol = 1e-3;
constexpr double kShotSigmas = 3.0;
constexpr double kWhichWayTol = 0.02;

// Masked onto the open cells and renormalized; the masked-away probability is returned.
WavePacket2D masked_start(const WavePacket2D& u0, const Potential2D& pot, double& masked_fraction) {
    WavePacket2D start = u0;
    apply_mask(start, pot);
    const double kept = start.norm2();
    if (!(kept > 0.0)) throw GeometryOutOfDomain("double slit: the initial packet lies entirely inside walls");
    masked_fraction = 1.0 - kept / u0.norm2();
    const double scale = 1.0 / std::sqrt(kept);
    for (auto& v : start.psi) v *= scale;
    return start;
}

struct Evolved {
    EvolutionRun run;
    Pmf pmf;
    double norm_drift = 0.0;
};

Evolved evolve_branch(const DoubleSlitConfig& c, const Potential2D& pot, const WavePacket2D& start) {
    const StopRule rule{c.physics.b, c.stop_fraction, c.max_steps};
    const EvolveOptions opt{c.backend, c.sponge};
    Evolved e{evolve_until(start, pot, c.dt, rule, opt), Pmf{}, 0.0};
    e.pmf = detector_pmf(e.run.packet, DetectorBinning(c.physics.b, c.physics.delta));
    e.norm_drift = std::abs(e.run.packet.norm2() + e.run.packet.absorbed - start.norm2());
    return e;
}

std::map<std::int64_t, double> by_bin(const Pmf& pmf) {
    std::map<std::int64_t, double> m;
    for (std::size_t k = 0; k < pmf.size(); ++k) m[pmf.outcomes()[k].parts().front()] = pmf.probabilities()[k];
    return m;
}

json pmf_summary(const BranchRun& b) {
    return json{{"steps", b.steps},
                {"reached_fraction", b.reached_fraction},
                {"fraction_beyond_screen", b.fraction_beyond},
                {"absorbed", b.absorbed},
                {"norm_drift", b.norm_drift},
                {"visibility", b.visibility},
                {"which_way", {{"upper", b.which_way.upper}, {"lower", b.which_way.lower},
                               {"remainder", b.which_way.remainder}}}};
}

Identity identity(std::string name, double residual, double tol) {
    return Identity{std::move(name), residual, tol, residual <= tol};
}

}  // namespace

double max_binomial_z(const Pmf& pmf, const Histogram& h) {
    if (h.counts.size() != pmf.size()) throw DimensionMismatch(pmf.size(), h.counts.size(), "max_binomial_z");
    const auto n = static_cast<double>(h.shots());
    auto z = [n](double p, std::uint64_t count) {
        const double mean = n * p;
        const double var = n * p * (1.0 - p);
        const double dev = std::abs(static_cast<double>(count) - mean);
        if (var <= 0.0) return dev == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        return dev / std::sqrt(var);
    };
    double worst = z(pmf.no_detection(), h.none);
    for (std::size_t k = 0; k < pmf.size(); ++k) worst = std::max(worst, z(pmf.probabilities()[k], h.counts[k]));
    return worst;
}

double superposition_tv(const Pmf& both, const Pmf& a_only, const Pmf& b_only) {
    const auto p = by_bin(both);
    const auto a = by_bin(a_only);
    const auto b = by_bin(b_only);
    std::map<std::int64_t, double> q;
    for (const auto& [n, v] : a)
        if (n > 0) q[n] += v;
    for (const auto& [n, v] : b)
        if (n < 0) q[n] += v;

    double tv = 0.0;
    std::map<std::int64_t, bool> seen;
    for (const auto& [n, v] : p) {
        if (n == 0) continue;
        seen[n] = true;
        const auto it = q.find(n);
        tv += std::abs(v - (it == q.end() ? 0.0 : it->second));
    }
    for (const auto& [n, v] : q)
        if (!seen.count(n)) tv += std::abs(v);
    return 0.5 * tv;
}

DoubleSlitReport simulate(const DoubleSlitConfig& c) {
    c.physics.validate();
    if (c.window_first > c.window_last || (c.window_first <= 0 && c.window_last >= 0))
        throw EmptyWindow("double slit: visibility window must be nonempty and exclude bin 0");

    const Grid2D grid(c.nx, c.ny, c.lx, c.ly, c.x_min);
    const WavePacket2D u0 = init_packet(grid, c.physics, c.source);

    DoubleSlitReport r;
    r.config = c;
    r.momentum = momentum_expectation(u0, c.physics.hbar);
    const double p0 = c.physics.hbar * c.physics.k0;
    r.momentum_rel_error = std::hypot(r.momentum.x - p0, r.momentum.y) / p0;

    const bool want1 = c.branches != BranchSelection::two;
    const bool want2 = c.branches != BranchSelection::one;
    const DetectorBinning binning(c.physics.b, c.physics.delta);

    auto finish = [&](int branch, const Evolved& e, std::uint64_t seed) {
        BranchRun b;
        b.branch = branch;
        b.pmf = e.pmf;
        b.steps = e.run.steps;
        b.reached_fraction = e.run.reached_fraction;
        b.fraction_beyond = e.run.fraction_beyond;
        b.absorbed = e.run.packet.absorbed;
        b.norm_drift = e.norm_drift;
        b.visibility = fringe_visibility(e.pmf, c.window_first, c.window_last, c.smoothing);
        b.which_way = which_way_mass(e.pmf);
        b.histogram = make_histogram("branch" + std::to_string(branch) + "_shots", e.pmf, c.shots, seed);
        return b;
    };

    std::optional<Potential2D> pot1;
    std::optional<Potential2D> pot2;
    std::optional<WavePacket2D> start1;
    std::optional<WavePacket2D> start2;
    if (want1) {
        pot1.emplace(build_potential(grid, c.physics, 1, c.geometry));
        start1.emplace(masked_start(u0, *pot1, r.masked_fraction));
        r.branch1 = finish(1, evolve_branch(c, *pot1, *start1), c.seed);
    }
    if (want2) {
        pot2.emplace(build_potential(grid, c.physics, 2, c.geometry));
        start2.emplace(masked_start(u0, *pot2, r.masked_fraction));
        r.branch2 = finish(2, evolve_branch(c, *pot2, *start2), c.seed + 1);

        SlitGeometry only_a = c.geometry;
        only_a.block_hole_b = true;
        SlitGeometry only_b = c.geometry;
        only_b.block_hole_a = true;
        const Potential2D pot_a = build_potential(grid, c.physics, 2, only_a);
        const Potential2D pot_b = build_potential(grid, c.physics, 2, only_b);
        // Same starting state as the two-hole run, so the oracle compares like with like.
        r.hole_a_only = evolve_branch(c, pot_a, *start2).pmf;
        r.hole_b_only = evolve_branch(c, pot_b, *start2).pmf;
        r.oracle_tv = superposition_tv(r.branch2->pmf, *r.hole_a_only, *r.hole_b_only);
    }

    try {
        (void)realize_sequential(noncommuting_surrogate_tree());
    } catch (const NonCommuting& e) {
        r.surrogate_raised = true;
        r.surrogate_commutator = e.commutator();
    }

    if (c.spot_check && want1 && want2) {
        // Phi_k F({1}) v = U_k* chi_{D_1} U_k v, both orderings on the branch-1 start vector.
        const EvolveOptions opt{c.backend, c.sponge};
        auto phi = [&](const Potential2D& pot, std::size_t steps, const WavePacket2D& v) {
            const WavePacket2D fwd = evolve(v, pot, c.dt, steps, opt);
            return evolve_adjoint(apply_bin_indicator(fwd, binning, 1), pot, c.dt, steps, opt);
        };
        const WavePacket2D ab = phi(*pot1, r.branch1->steps, phi(*pot2, r.branch2->steps, *start1));
        const WavePacket2D ba = phi(*pot2, r.branch2->steps, phi(*pot1, r.branch1->steps, *start1));
        double diff = 0.0;
        for (std::size_t k = 0; k < ab.psi.size(); ++k) diff += std::norm(ab.psi[k] - ba.psi[k]);
        r.spot_check_residual = std::sqrt(diff * grid.cell_area() / start1->norm2());
    }
    return r;
}

ScenarioResult to_result(const DoubleSlitReport& r) {
    const auto& c = r.config;
    ScenarioResult out;
    out.scenario = "doubleslit";
    out.parameters = {
        {"grid", {{"nx", c.nx}, {"ny", c.ny}, {"lx", c.lx}, {"ly", c.ly}, {"x_min", c.x_min}}},
        {"physics",
         {{"hbar", c.physics.hbar}, {"mass", c.physics.mass}, {"k0", c.physics.k0}, {"sigma", c.physics.sigma},
          {"delta", c.physics.delta}, {"b", c.physics.b}}},
        {"geometry",
         {{"wedge_back_x", c.geometry.wedge_back_x}, {"inner_tip_x", c.geometry.inner_tip_x},
          {"slit_x", c.geometry.slit_x}, {"hole_center", c.geometry.hole_center},
          {"hole_half_width", c.geometry.hole_half_width}, {"wall_half_thickness", c.geometry.wall_half_thickness},
          {"separator_end_x", c.geometry.separator_end_x ? json(*c.geometry.separator_end_x) : json("grid edge")}}},
        {"source", {{"x", c.source.x}, {"y", c.source.y}}},
        {"dt", c.dt},
        {"stop_rule", {{"screen_x", c.physics.b}, {"fraction", c.stop_fraction}, {"max_steps", c.max_steps}}},
        {"sponge", {{"width", c.sponge.width}, {"strength", c.sponge.strength}}},
        {"backend", c.backend == Backend::omp ? "omp" : "serial"},
        {"branches", c.branches == BranchSelection::one ? "1" : c.branches == BranchSelection::two ? "2" : "both"},
        {"shots", c.shots},
        {"seed", c.seed},
        {"visibility_window", {{"first", c.window_first}, {"last", c.window_last}, {"smoothing", c.smoothing}}},
    };

    out.identities.push_back(identity("u0_momentum_relative_error", r.momentum_rel_error, kMomentumTol));
    json branches = json::object();
    for (const auto* b : {&r.branch1, &r.branch2}) {
        if (!*b) continue;
        const auto& run = **b;
        const std::string tag = "branch" + std::to_string(run.branch);
        out.pmfs.push_back({tag, run.pmf});
        out.histograms.push_back(run.histogram);
        out.identities.push_back(identity(tag + "_norm_drift", run.norm_drift, kNormDriftTol));
        out.identities.push_back(identity(tag + "_shots_max_z", max_binomial_z(run.pmf, run.histogram), kShotSigmas));
        branches[tag] = pmf_summary(run);
    }
    if (r.branch2) {
        const auto& w = r.branch2->which_way;
        const double mean = 0.5 * (w.upper + w.lower);
        out.identities.push_back(
            identity("branch2_which_way_symmetry", mean > 0.0 ? std::abs(w.upper - w.lower) / mean : 0.0, kWhichWayTol));
    }
    if (r.hole_a_only) out.pmfs.push_back({"branch2_hole_a_only", *r.hole_a_only});
    if (r.hole_b_only) out.pmfs.push_back({"branch2_hole_b_only", *r.hole_b_only});
    if (r.oracle_tv) out.identities.push_back(identity("branch2_superposition_tv", *r.oracle_tv, kOracleTol));
    if (r.branch1 && r.branch2) {
        // Pass means branch 1 leads by more than the margin; the residual is the actual gap.
        const double gap = r.branch1->visibility - r.branch2->visibility;
        out.identities.push_back(Identity{"visibility_gap", gap, kVisibilityMargin, gap > kVisibilityMargin});
    }
    out.identities.push_back(
        Identity{"two_branch_surrogate_refused", r.surrogate_commutator, kCommuteTol, r.surrogate_raised});

    out.metadata = {
        {"masked_fraction", r.masked_fraction},
        {"u0_momentum", {{"px", r.momentum.x}, {"py", r.momentum.y}}},
        {"branches", branches},
        {"max_stable_dt", max_stable_dt(Grid2D(c.nx, c.ny, c.lx, c.ly, c.x_min), c.physics.hbar, c.physics.mass)},
        {"units", "hbar = m = 1 by default; lengths in grid units"},
        {"no_detection", "probability absorbed by the boundary sponge"},
        {"spot_check_residual", r.spot_check_residual ? json(*r.spot_check_residual) : json(nullptr)},
    };
    return out;
}

}  // namespace qmeas::doubleslit
