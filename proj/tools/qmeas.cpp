// qmeas: run canned scenarios and the double-slit pipeline, print or write JSON/CSV.
//
//   qmeas scenario <eraser|wheeler|hardy|three-boxes|doubleslit> [--json|--csv] [--out PATH]
//                  [--alpha1 RE,IM --alpha2 RE,IM]
//   qmeas doubleslit --branch {1|2|both} --nx N --ny N --dt T --max-steps N --k0 K --sigma S
//                    --delta D --b B --shots K --seed S --out DIR
//
// Exit codes: 0 success, 2 validation error, 3 numeric failure.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qmeas/emit.hpp"
#include "qmeas/errors.hpp"
#include "qmeas/scenarios.hpp"

namespace {

using qmeas::Complex;

Complex parse_complex(const std::string& text) {
    const auto comma = text.find(',');
    try {
        std::size_t used = 0;
        if (comma == std::string::npos) {
            const double re = std::stod(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
            return {re, 0.0};
        }
        const std::string a = text.substr(0, comma);
        const std::string b = text.substr(comma + 1);
        const double re = std::stod(a, &used);
        if (used != a.size()) throw std::invalid_argument(text);
        const double im = std::stod(b, &used);
        if (used != b.size()) throw std::invalid_argument(text);
        return {re, im};
    } catch (const std::logic_error&) {
        throw qmeas::ValidationError("cannot parse complex amplitude '" + text + "' (expected RE,IM)");
    }
}

void output(const qmeas::ScenarioResult& r, qmeas::Format fmt, const std::string& out) {
    if (out.empty())
        std::cout << qmeas::render(r, fmt);
    else
        qmeas::emit(r, fmt, out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum measurement scenarios and double-slit simulation"};
    app.require_subcommand(1);

    // scenario
    auto* scen = app.add_subcommand("scenario", "run a canned scenario");
    std::string name;
    bool as_csv = false;
    bool as_json = false;
    std::string scen_out;
    std::string alpha1;
    std::string alpha2;
    scen->add_option("name", name, "eraser, wheeler, hardy, three-boxes, doubleslit")
        ->required()
        ->check(CLI::IsMember({"eraser", "wheeler", "hardy", "three-boxes", "doubleslit"}));
    auto* json_flag = scen->add_flag("--json", as_json, "JSON output (default)");
    scen->add_flag("--csv", as_csv, "CSV output (with --out, a directory of files)")->excludes(json_flag);
    scen->add_option("--out", scen_out, "output path");
    auto* a1 = scen->add_option("--alpha1", alpha1, "eraser amplitude RE,IM");
    auto* a2 = scen->add_option("--alpha2", alpha2, "eraser amplitude RE,IM");
    a1->needs(a2);
    a2->needs(a1);

    // doubleslit
    qmeas::doubleslit::DoubleSlitConfig cfg;
    auto* ds = app.add_subcommand("doubleslit", "run the two-branch double-slit pipeline");
    std::string branch = "both";
    std::string ds_out;
    bool ds_csv = false;
    std::string backend = "omp";
    ds->add_option("--branch", branch, "1, 2 or both")->check(CLI::IsMember({"1", "2", "both"}));
    ds->add_option("--nx", cfg.nx, "grid points along x")->capture_default_str();
    ds->add_option("--ny", cfg.ny, "grid points along y")->capture_default_str();
    ds->add_option("--dt", cfg.dt, "time step")->capture_default_str();
    ds->add_option("--max-steps", cfg.max_steps, "step cap of the stopping rule")->capture_default_str();
    ds->add_option("--stop-fraction", cfg.stop_fraction, "stop once this much probability has x >= b")
        ->capture_default_str();
    ds->add_option("--k0", cfg.physics.k0, "carrier wavenumber")->capture_default_str();
    ds->add_option("--sigma", cfg.physics.sigma, "packet width")->capture_default_str();
    ds->add_option("--delta", cfg.physics.delta, "detector strip height")->capture_default_str();
    ds->add_option("--b", cfg.physics.b, "screen position")->capture_default_str();
    ds->add_option("--shots", cfg.shots, "simulated detections per branch")->capture_default_str();
    ds->add_option("--seed", cfg.seed, "sampling seed")->capture_default_str();
    ds->add_option("--window-first", cfg.window_first, "first bin of the visibility window")->capture_default_str();
    ds->add_option("--window-last", cfg.window_last, "last bin of the visibility window")->capture_default_str();
    ds->add_option("--backend", backend, "omp or serial")->check(CLI::IsMember({"omp", "serial"}));
    ds->add_flag("--spot-check", cfg.spot_check, "apply both orderings of the two branch effects to one vector");
    ds->add_flag("--csv", ds_csv, "also write CSV files next to result.json");
    ds->add_option("--out", ds_out, "output directory (JSON to stdout when omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (scen->parsed()) {
            const auto fmt = as_csv ? qmeas::Format::csv : qmeas::Format::json;
            qmeas::ScenarioResult r;
            if (name == "eraser") {
                qmeas::EraserSpec spec;
                if (!alpha1.empty()) {
                    spec.alpha1 = parse_complex(alpha1);
                    spec.alpha2 = parse_complex(alpha2);
                }
                r = qmeas::run_eraser(spec);
            } else if (name == "wheeler") {
                r = qmeas::run_wheeler();
            } else if (name == "hardy") {
                r = qmeas::run_hardy();
            } else if (name == "three-boxes") {
                r = qmeas::run_three_boxes();
            } else {
                r = qmeas::doubleslit::run_doubleslit();
            }
            output(r, fmt, scen_out);
            return 0;
        }

        cfg.branches = branch == "1"   ? qmeas::doubleslit::BranchSelection::one
                       : branch == "2" ? qmeas::doubleslit::BranchSelection::two
                                       : qmeas::doubleslit::BranchSelection::both;
        cfg.backend = backend == "serial" ? qmeas::doubleslit::Backend::serial : qmeas::doubleslit::Backend::omp;
        const auto r = qmeas::doubleslit::run_doubleslit(cfg);
        if (ds_out.empty()) {
            std::cout << qmeas::render(r, qmeas::Format::json);
        } else {
            std::error_code ec;
            std::filesystem::create_directories(ds_out, ec);
            if (ec) throw qmeas::IoFailure("cannot create directory '" + ds_out + "': " + ec.message());
            qmeas::emit(r, qmeas::Format::json, std::filesystem::path(ds_out) / "result.json");
            if (ds_csv) qmeas::emit(r, qmeas::Format::csv, ds_out);
        }
        return 0;
    } catch (const qmeas::ValidationError& e) {
        std::cerr << "qmeas: " << e.what() << "\n";
        return 2;
    } catch (const qmeas::NumericError& e) {
        std::cerr << "qmeas: " << e.what() << "\n";
        return 3;
    } catch (const qmeas::IoFailure& e) {
        std::cerr << "qmeas: " << e.what() << "\n";
        return 2;
    }
}
