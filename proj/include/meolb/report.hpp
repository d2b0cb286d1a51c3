#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "meolb/engine.hpp"

namespace meolb {

/// Column order of results.csv. Fixed; readers index by position.
inline constexpr const char* kResultsColumns[] = {
    "slot", "time", "satellite", "rate_bps", "serving_gs", "direct_bps",
    "relayed_out_bps", "relayed_in_bps", "t_star_bps", "degenerate"};

/// Column order of the combined two-arm CSV written by compare.
inline constexpr const char* kCombinedColumns[] = {
    "slot", "time", "satellite", "baseline_bps", "isl_bps", "baseline_degenerate", "isl_degenerate"};

void write_results_csv(std::ostream& out, const RunResult& result);
void write_combined_csv(std::ostream& out, const RunResult& baseline, const RunResult& treatment);

nlohmann::json summary_to_json(const RunSummary& summary);
RunSummary summary_from_json(const nlohmann::json& doc);

/// summary.json: run metadata, degenerate slots and the summary block.
nlohmann::json run_to_json(const RunResult& result);
/// allocations.json: per-slot fractions and edge rates, every ring ISL edge listed.
nlohmann::json allocations_to_json(const RunResult& result);
nlohmann::json comparison_to_json(const ComparisonReport& report);

/// Series recovered from a results.csv file.
struct SeriesTable {
  std::vector<std::string> satellite_names;
  std::vector<std::string> times;  // per slot
  Grid<double> series;             // K×N
  std::vector<double> t_star_bps;  // per slot
  std::vector<int> degenerate_slots;
};

/// Throws std::runtime_error on a malformed file.
SeriesTable read_results_csv(std::istream& in);

/// Both arms recovered from a combined CSV.
struct CombinedTable {
  std::vector<std::string> satellite_names;
  std::vector<std::string> times;
  Grid<double> baseline;
  Grid<double> treatment;
  std::vector<int> baseline_degenerate;
  std::vector<int> treatment_degenerate;
};

CombinedTable read_combined_csv(std::istream& in);

/// Helpers for the output directory layout.
void write_text_file(const std::filesystem::path& path, const std::string& text);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace meolb
