#pragma once

#include <optional>
#include <string>
#include <vector>

#include "meolb/acmcf.hpp"
#include "meolb/scenario.hpp"

namespace meolb {

struct RunOptions {
  /// Worker threads for slot evaluation; 0 picks the hardware concurrency.
  unsigned threads = 0;
  double histogram_bin_bps = 5e6;
  lp::SolveOptions solve;
};

struct SlotResult {
  int slot_index = 0;
  TimePoint time{};  // slot start
  SlotGraph graph;
  std::vector<int> isolated;
  std::optional<AllocationResult> allocation;  // empty for degenerate slots
  int lp_iterations = 0;

  bool degenerate() const { return !allocation.has_value(); }
};

struct Histogram {
  double bin_width = 0.0;
  double origin = 0.0;  // left edge of bin 0, a multiple of bin_width
  std::vector<std::size_t> counts;
  bool operator==(const Histogram&) const = default;
};

struct SatelliteSummary {
  std::string name;
  std::size_t samples = 0;
  double mean_bps = 0.0;
  double std_bps = 0.0;  // population std over time
  double min_bps = 0.0;
  double max_bps = 0.0;
  Histogram histogram;
  bool operator==(const SatelliteSummary&) const = default;
};

struct ConstellationSummary {
  std::size_t samples = 0;
  double min_bps = 0.0;   // over all (k, n) of valid slots
  double mean_bps = 0.0;
  double std_bps = 0.0;   // pooled over all (k, n)
  double mean_std_over_time_bps = 0.0;        // mean_k of per-satellite std
  double mean_std_across_satellites_bps = 0.0;  // mean_n of std over k within a slot
  double mean_t_star_bps = 0.0;
  bool operator==(const ConstellationSummary&) const = default;
};

struct RunSummary {
  std::vector<SatelliteSummary> satellites;
  ConstellationSummary constellation;
  bool operator==(const RunSummary&) const = default;
};

struct RunResult {
  std::string scenario_name;
  bool isl_enabled = true;
  TimeGrid grid;
  std::vector<std::string> satellite_names;
  std::vector<std::string> station_ids;
  std::vector<SlotResult> slots;
  Grid<double> series;  // K×N, R_k[n] in bit/s; 0 in degenerate slots
  std::vector<int> degenerate_slots;
  RunSummary summary;
};

RunResult run(const Scenario& scenario, bool isl_enabled, const RunOptions& options = {});

/// Statistics over the non-degenerate slots of `series`.
RunSummary summarize(const Grid<double>& series, const std::vector<int>& degenerate_slots,
                     const std::vector<std::string>& satellite_names, const std::vector<double>& t_star_bps,
                     double bin_width_bps = 5e6);
RunSummary summarize(const RunResult& result, double bin_width_bps = 5e6);

struct ComparisonReport {
  std::vector<int> common_degenerate_slots;  // excluded from both summaries below
  RunSummary baseline;
  RunSummary treatment;
  double min_rate_improvement_pct = 0.0;  // (min_T - min_B) / min_B
  double mean_delta_pct = 0.0;            // (mean_T - mean_B) / mean_B
  double std_reduction_pct = 0.0;         // (std_B - std_T) / std_B on the mean per-satellite std
  double variance_reduction_pct = 0.0;    // same on the mean per-satellite variance
  std::vector<double> std_ratio;          // per satellite std_T / std_B
};

/// Throws std::invalid_argument on mismatched grids or a non-positive baseline minimum.
ComparisonReport compare(const RunResult& baseline, const RunResult& treatment);

}  // namespace meolb
