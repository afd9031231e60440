#pragma once

// Deterministic serialization of scenario results: sorted keys, 17 significant digits, '\n'.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "qmeas/scenarios.hpp"

namespace qmeas {

enum class Format { json, csv };

nlohmann::json to_json(const ScenarioResult& result);

/// Pretty JSON with sorted keys and every float printed with 17 significant digits.
std::string canonical_dump(const nlohmann::json& value);
std::string format_double(double v);

/// "bin,probability" rows in outcome order, then a "none" row for the no-detection mass.
std::string pmf_csv(const Pmf& pmf);
/// "bin,count" rows, then "none".
std::string histogram_csv(const Histogram& histogram);

/// JSON: one file at `path`. CSV: `path` is a directory receiving <label>.csv per pmf and
/// per histogram. Throws IoFailure.
void emit(const ScenarioResult& result, Format format, const std::filesystem::path& path);

/// Everything emit would write, as one stream (CSV blocks each preceded by "# <label>").
std::string render(const ScenarioResult& result, Format format);

void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace qmeas
