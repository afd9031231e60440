#pragma once

// Canned scenario drivers: the eraser, Wheeler's delayed choice, Hardy, three boxes,
// and the two-branch double-slit pipeline. Every driver is a pure function of its inputs.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmeas/causality.hpp"
#include "qmeas/doubleslit/detector.hpp"
#include "qmeas/doubleslit/evolve.hpp"
#include "qmeas/doubleslit/grid.hpp"
#include "qmeas/doubleslit/potential.hpp"
#include "qmeas/measurement.hpp"

namespace qmeas {

struct LabeledPmf {
    std::string label;
    Pmf pmf;
};

struct LabeledValues {
    std::string label;
    std::vector<Outcome> outcomes;
    std::vector<Complex> values;
};

/// A named check, always reported with the tolerance it was judged against.
struct Identity {
    std::string name;
    double residual = 0.0;
    double tol = 0.0;
    bool pass = false;
};

/// Seeded shot counts over a pmf's outcomes plus the no-detection count.
struct Histogram {
    std::string label;
    std::vector<Outcome> outcomes;
    std::vector<std::uint64_t> counts;
    std::uint64_t none = 0;
    std::uint64_t shots() const;
};

struct ScenarioResult {
    std::string scenario;
    nlohmann::json parameters = nlohmann::json::object();
    std::vector<LabeledPmf> pmfs;
    std::vector<LabeledValues> weak_values;
    std::vector<Identity> identities;
    std::vector<Histogram> histograms;
    nlohmann::json metadata = nlohmann::json::object();

    const LabeledPmf& pmf(const std::string& label) const;
    const Identity& identity(const std::string& name) const;
    const LabeledValues& weak(const std::string& label) const;
    bool all_pass() const;
};

/// psi = alpha1 e1 (x) u1 + alpha2 e2 (x) u2 in C^2 (x) H, measured with O_E (x) O and O_x (x) O.
/// Defaults: H = C^2, u1, u2 the standard basis, O = {1: |u1+u2><u1+u2|/2, 2: |u1-u2><u1-u2|/2}.
struct EraserSpec {
    Complex alpha1 = 1.0 / std::sqrt(2.0);
    Complex alpha2 = 1.0 / std::sqrt(2.0);
    std::optional<CVec> u1;
    std::optional<CVec> u2;
    std::optional<Povm> inner;
};

/// The which-path observable O_x on C^2 with outcomes -1, 1.
Povm which_path_x();

/// Throws InvalidAmplitudes unless |alpha1|^2 + |alpha2|^2 = 1 within 1e-12 and u1, u2 are orthonormal.
ScenarioResult run_eraser(const EraserSpec& spec = {});
ScenarioResult run_wheeler();
ScenarioResult run_hardy();
ScenarioResult run_three_boxes();

/// Two leaves with O_f, reached through the half-mirror unitary and the identity.
/// Realizing it must fail the commutativity gate.
CausalTree noncommuting_surrogate_tree();

namespace doubleslit {

enum class BranchSelection { one, two, both };

struct DoubleSlitConfig {
    std::size_t nx = 512;
    std::size_t ny = 384;
    double lx = 512.0;
    double ly = 384.0;
    double x_min = -128.0;
    PhysicalParams physics{};
    SlitGeometry geometry{};
    Vec2 source{};
    double dt = 0.5;
    double stop_fraction = 0.9;
    std::size_t max_steps = 650;
    Sponge sponge{};
    Backend backend = Backend::omp;
    BranchSelection branches = BranchSelection::both;
    std::size_t shots = 100000;
    std::uint64_t seed = 20240917;
    std::int64_t window_first = 1;
    std::int64_t window_last = 10;
    std::size_t smoothing = 0;
    bool spot_check = false;
};

/// Visibility of branch 1 must exceed branch 2 by this much.
inline constexpr double kVisibilityMargin = 0.2;

struct BranchRun {
    int branch = 1;
    Pmf pmf;
    std::size_t steps = 0;
    bool reached_fraction = false;
    double fraction_beyond = 0.0;
    double absorbed = 0.0;
    double norm_drift = 0.0;
    double visibility = 0.0;
    WhichWay which_way;
    Histogram histogram;
};

struct DoubleSlitReport {
    DoubleSlitConfig config;
    double masked_fraction = 0.0;
    Vec2 momentum{};
    double momentum_rel_error = 0.0;
    std::optional<BranchRun> branch1;
    std::optional<BranchRun> branch2;
    // Branch-2 superposition oracle: hole B walled, then hole A walled.
    std::optional<Pmf> hole_a_only;
    std::optional<Pmf> hole_b_only;
    std::optional<double> oracle_tv;
    double surrogate_commutator = 0.0;
    bool surrogate_raised = false;
    std::optional<double> spot_check_residual;
};

/// Throws whatever the double-slit layer throws for an invalid configuration.
DoubleSlitReport simulate(const DoubleSlitConfig& config);
ScenarioResult to_result(const DoubleSlitReport& report);
inline ScenarioResult run_doubleslit(const DoubleSlitConfig& config = {}) { return to_result(simulate(config)); }

/// Max over bins (and the no-detection bucket) of |count - N p| / sqrt(N p (1 - p)),
/// with a bin of zero variance scoring 0 if its count matches exactly and infinity otherwise.
double max_binomial_z(const Pmf& pmf, const Histogram& histogram);

/// 1/2 sum over bins n != 0 of |p(n) - q(n)|, where q takes the A-only pmf on n > 0
/// and the B-only pmf on n < 0.
double superposition_tv(const Pmf& both, const Pmf& a_only, const Pmf& b_only);

}  // namespace doubleslit

/// Shot counts from sample_indices.
Histogram make_histogram(std::string label, const Pmf& pmf, std::size_t shots, std::uint64_t seed);

}  // namespace qmeas
