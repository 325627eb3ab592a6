#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "plstat/montecarlo.hpp"

namespace plstat::cli {

using nlohmann::json;

/// Pretty-printed JSON with sorted keys, floats at 17 significant digits and
/// non-finite floats written as the strings "nan", "inf", "-inf". Ends with a
/// newline. Equal documents always give equal bytes.
std::string canonical_json(const json& doc);

/// True if any float in the document is NaN.
bool contains_nan(const json& doc);

/// Everything a run needs besides the worker count.
struct RunSpec {
  ExperimentConfig experiment;
  std::vector<int> scan_sizes;         // rigidity growth scan; empty for a single n
  double max_growth_exponent = -1.0;   // < 0: ensemble default
};

json entry_to_json(const EntryDistribution& dist);
json config_to_json(const RunSpec& spec);

/// Strict parse: unknown keys, wrong types and missing required fields are
/// all collected and thrown together as ConfigError.
RunSpec config_from_json(const json& doc);

json variance_report_to_json(const VarianceReport& report);

/// Report document; a NaN anywhere forces "pass" to false.
json report_to_json(const ComparisonReport& report, std::size_t replications);

/// "replication,value" header then one row per sample in replication order.
std::string samples_csv(const std::vector<double>& samples);

/// Reads the "value" column of a CSV with a header row.
std::vector<double> read_samples_csv(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);

json read_json_file(const std::filesystem::path& path);

}  // namespace plstat::cli
