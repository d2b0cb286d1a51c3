#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>

namespace meolb::cli {

enum ExitCode : int {
  kSuccess = 0,
  kFailure = 1,
  kBadInput = 2,    // malformed scenario or missing inputs
  kDegenerate = 3,  // some slots had isolated satellites; outputs still written
};

struct RunFlags {
  bool no_isl = false;
  std::filesystem::path out_dir = "out";
  bool deterministic = false;  // single-threaded slot evaluation
  unsigned threads = 0;
};

/// Writes results.csv, summary.json, allocations.json and scenario.json into `out_dir`.
int cmd_run(const std::filesystem::path& scenario_path, const RunFlags& flags, std::ostream& log,
            std::ostream& err);

/// Runs both arms; writes compare.json, compare.csv, scenario.json and one
/// sub-directory per arm ("baseline", "isl") with the cmd_run outputs.
int cmd_compare(const std::filesystem::path& scenario_path, const RunFlags& flags, std::ostream& log,
                std::ostream& err);

enum class PlotKind { kTimeseries, kHistogram, kRainAttenuation };

std::optional<PlotKind> parse_plot_kind(std::string_view text);

/// Reads compare.csv (preferred) or results.csv plus scenario.json from `results_dir`
/// and writes the SVG files next to them unless `out_dir` is given.
int cmd_plot(const std::filesystem::path& results_dir, PlotKind kind,
             const std::optional<std::filesystem::path>& out_dir, std::ostream& log, std::ostream& err);

/// Prints the slot's max-min LP in CPLEX LP format.
int cmd_dump_lp(const std::filesystem::path& scenario_path, int slot, bool no_isl, std::ostream& out,
                std::ostream& err);

}  // namespace meolb::cli
