#include "qmeas/emit.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qmeas/errors.hpp"

namespace qmeas {

namespace {

using nlohmann::json;

std::string csv_label(const Outcome& o) {
    const std::string s = o.str();
    return s.find(',') == std::string::npos ? s : "\"" + s + "\"";
}

void dump(const json& v, int depth, std::string& out) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
    switch (v.type()) {
        case json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& [key, item] : v.items()) {  // std::map storage, so keys come sorted
                if (!first) out += ",\n";
                first = false;
                out += pad + json(key).dump() + ": ";
                dump(item, depth + 1, out);
            }
            out += "\n" + close_pad + "}";
            return;
        }
        case json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t k = 0; k < v.size(); ++k) {
                if (k) out += ",\n";
                out += pad;
                dump(v[k], depth + 1, out);
            }
            out += "\n" + close_pad + "]";
            return;
        }
        case json::value_t::number_float:
            out += format_double(v.get<double>());
            return;
        default:
            out += v.dump();
    }
}

}  // namespace

std::string format_double(double v) {
    if (!std::isfinite(v)) return "null";
    if (v == 0.0) v = 0.0;  // no "-0"
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string canonical_dump(const json& value) {
    std::string out;
    dump(value, 0, out);
    out += "\n";
    return out;
}

json to_json(const ScenarioResult& r) {
    json pmfs = json::array();
    for (const auto& p : r.pmfs) {
        json outcomes = json::array();
        for (std::size_t k = 0; k < p.pmf.size(); ++k)
            outcomes.push_back({{"label", p.pmf.outcomes()[k].str()}, {"p", p.pmf.probabilities()[k]}});
        pmfs.push_back({{"label", p.label}, {"outcomes", outcomes}, {"no_detection", p.pmf.no_detection()}});
    }
    json weak = json::array();
    for (const auto& w : r.weak_values) {
        json values = json::array();
        json labels = json::array();
        for (const auto& z : w.values) values.push_back({{"re", z.real()}, {"im", z.imag()}});
        for (const auto& o : w.outcomes) labels.push_back(o.str());
        weak.push_back({{"label", w.label}, {"values", values}, {"outcomes", labels}});
    }
    json ids = json::array();
    for (const auto& i : r.identities)
        ids.push_back({{"name", i.name}, {"residual", i.residual}, {"tol", i.tol}, {"pass", i.pass}});

    json meta = r.metadata;
    if (!r.histograms.empty()) {
        json hs = json::array();
        for (const auto& h : r.histograms) {
            json counts = json::array();
            for (std::size_t k = 0; k < h.outcomes.size(); ++k)
                counts.push_back({{"label", h.outcomes[k].str()}, {"count", h.counts[k]}});
            hs.push_back({{"label", h.label}, {"counts", counts}, {"none", h.none}, {"shots", h.shots()}});
        }
        meta["histograms"] = hs;
    }
    return {{"scenario", r.scenario}, {"parameters", r.parameters}, {"pmfs", pmfs},
            {"weak_values", weak},    {"identities", ids},          {"metadata", meta}};
}

std::string pmf_csv(const Pmf& pmf) {
    std::string out = "bin,probability\n";
    for (std::size_t k = 0; k < pmf.size(); ++k)
        out += csv_label(pmf.outcomes()[k]) + "," + format_double(pmf.probabilities()[k]) + "\n";
    out += "none," + format_double(pmf.no_detection()) + "\n";
    return out;
}

std::string histogram_csv(const Histogram& h) {
    std::string out = "bin,count\n";
    for (std::size_t k = 0; k < h.outcomes.size(); ++k)
        out += csv_label(h.outcomes[k]) + "," + std::to_string(h.counts[k]) + "\n";
    out += "none," + std::to_string(h.none) + "\n";
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoFailure("cannot open '" + path.string() + "' for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw IoFailure("write to '" + path.string() + "' failed");
}

std::string render(const ScenarioResult& r, Format format) {
    if (format == Format::json) return canonical_dump(to_json(r));
    std::string out;
    for (const auto& p : r.pmfs) out += (out.empty() ? "" : "\n") + ("# " + p.label + "\n") + pmf_csv(p.pmf);
    for (const auto& h : r.histograms) out += (out.empty() ? "" : "\n") + ("# " + h.label + "\n") + histogram_csv(h);
    return out;
}

void emit(const ScenarioResult& r, Format format, const std::filesystem::path& path) {
    if (format == Format::json) {
        write_file(path, render(r, format));
        return;
    }
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw IoFailure("cannot create directory '" + path.string() + "': " + ec.message());
    for (const auto& p : r.pmfs) write_file(path / (p.label + ".csv"), pmf_csv(p.pmf));
    for (const auto& h : r.histograms) write_file(path / (h.label + ".csv"), histogram_csv(h));
}

}  // namespace qmeas
