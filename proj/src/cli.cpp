#include "meolb/cli.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <fstream>
#include <ostream>
#include <sstream>

#include "meolb/engine.hpp"
#include "meolb/plots.hpp"
#include "meolb/report.hpp"

namespace meolb::cli {

namespace fs = std::filesystem;

namespace {

RunOptions run_options(const RunFlags& flags) {
  RunOptions o;
  o.threads = flags.deterministic ? 1 : flags.threads;
  return o;
}

void write_arm(const fs::path& dir, const RunResult& result) {
  fs::create_directories(dir);
  std::ostringstream csv;
  write_results_csv(csv, result);
  write_text_file(dir / "results.csv", csv.str());
  write_json_file(dir / "summary.json", run_to_json(result));
  write_json_file(dir / "allocations.json", allocations_to_json(result));
}

void report_degenerate(std::ostream& err, const RunResult& r) {
  if (r.degenerate_slots.empty()) return;
  std::string list;
  for (std::size_t n = 0; n < r.degenerate_slots.size(); ++n) {
    if (n == 8) {
      list += fmt::format(", ... ({} total)", r.degenerate_slots.size());
      break;
    }
    list += (n ? ", " : "") + std::to_string(r.degenerate_slots[n]);
  }
  fmt::print(err, "warning: {} run has degenerate slots (isolated satellites): {}\n",
             r.isl_enabled ? "ISL" : "no-ISL", list);
}

void print_summary(std::ostream& log, const RunResult& r) {
  const ConstellationSummary& c = r.summary.constellation;
  fmt::print(log, "{} [{}]: {} slots, min {:.3f} Mbit/s, mean {:.3f} Mbit/s, mean std {:.3f} Mbit/s\n",
             r.scenario_name, r.isl_enabled ? "ISL" : "no ISL", r.slots.size(), c.min_bps / 1e6, c.mean_bps / 1e6,
             c.mean_std_over_time_bps / 1e6);
}

/// Loads a scenario, mapping reader errors to kBadInput.
std::optional<Scenario> load(const fs::path& path, std::ostream& err) {
  try {
    return load_scenario(path);
  } catch (const ScenarioError& e) {
    fmt::print(err, "error: {}\n", e.what());
  }
  return std::nullopt;
}

std::optional<std::string> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int cmd_run(const fs::path& scenario_path, const RunFlags& flags, std::ostream& log, std::ostream& err) {
  const auto scenario = load(scenario_path, err);
  if (!scenario) return kBadInput;
  try {
    const bool isl = scenario->policies.isl_enabled && !flags.no_isl;
    const RunResult result = run(*scenario, isl, run_options(flags));
    write_arm(flags.out_dir, result);
    write_json_file(flags.out_dir / "scenario.json", scenario_to_json(*scenario));
    print_summary(log, result);
    report_degenerate(err, result);
    return result.degenerate_slots.empty() ? kSuccess : kDegenerate;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kFailure;
  }
}

int cmd_compare(const fs::path& scenario_path, const RunFlags& flags, std::ostream& log, std::ostream& err) {
  const auto scenario = load(scenario_path, err);
  if (!scenario) return kBadInput;
  try {
    const RunOptions options = run_options(flags);
    const RunResult baseline = run(*scenario, false, options);
    const RunResult treatment = run(*scenario, true, options);
    fs::create_directories(flags.out_dir);
    write_arm(flags.out_dir / "baseline", baseline);
    write_arm(flags.out_dir / "isl", treatment);
    write_json_file(flags.out_dir / "scenario.json", scenario_to_json(*scenario));
    std::ostringstream csv;
    write_combined_csv(csv, baseline, treatment);
    write_text_file(flags.out_dir / "compare.csv", csv.str());
    print_summary(log, baseline);
    print_summary(log, treatment);
    report_degenerate(err, baseline);
    report_degenerate(err, treatment);

    const ComparisonReport report = compare(baseline, treatment);
    nlohmann::json doc = comparison_to_json(report);
    doc["scenario"] = scenario->name;
    write_json_file(flags.out_dir / "compare.json", doc);
    fmt::print(log, "min-rate improvement {:.2f}%, mean delta {:.3f}%, std reduction {:.2f}%\n",
               report.min_rate_improvement_pct, report.mean_delta_pct, report.std_reduction_pct);
    const bool degenerate = !baseline.degenerate_slots.empty() || !treatment.degenerate_slots.empty();
    return degenerate ? kDegenerate : kSuccess;
  } catch (const std::invalid_argument& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kDegenerate;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kFailure;
  }
}

std::optional<PlotKind> parse_plot_kind(std::string_view text) {
  if (text == "timeseries") return PlotKind::kTimeseries;
  if (text == "histogram") return PlotKind::kHistogram;
  if (text == "rain-attenuation") return PlotKind::kRainAttenuation;
  return std::nullopt;
}

int cmd_plot(const fs::path& results_dir, PlotKind kind, const std::optional<fs::path>& out_dir, std::ostream& log,
             std::ostream& err) {
  const fs::path dest = out_dir.value_or(results_dir);
  try {
    std::optional<Scenario> scenario;
    if (fs::exists(results_dir / "scenario.json")) {
      scenario = load(results_dir / "scenario.json", err);
      if (!scenario) return kBadInput;
    }

    if (kind == PlotKind::kRainAttenuation) {
      if (!scenario) {
        fmt::print(err, "error: {} not found\n", (results_dir / "scenario.json").string());
        return kBadInput;
      }
      const auto classes = rain_classes(*scenario);
      if (classes.empty()) {
        fmt::print(err, "error: scenario has no rain events to plot\n");
        return kBadInput;
      }
      std::vector<RainCurve> curves;
      for (const RainClass& c : classes) curves.push_back(rain_curve(c, scenario->links.rain));
      fs::create_directories(dest);
      write_text_file(dest / "rain_attenuation.svg", rain_attenuation_svg(curves));
      fmt::print(log, "wrote {}\n", (dest / "rain_attenuation.svg").string());
      return kSuccess;
    }

    const Scenario* sc = scenario ? &*scenario : nullptr;
    std::vector<std::string> names;
    std::vector<std::string> files;
    if (const auto combined = read_file(results_dir / "compare.csv")) {
      std::istringstream in(*combined);
      const CombinedTable table = read_combined_csv(in);
      names = table.satellite_names;
      files = kind == PlotKind::kTimeseries ? std::vector<std::string>{timeseries_svg(table, sc)}
                                            : histogram_svgs(table);
    } else if (const auto single = read_file(results_dir / "results.csv")) {
      std::istringstream in(*single);
      const SeriesTable table = read_results_csv(in);
      names = table.satellite_names;
      files = kind == PlotKind::kTimeseries ? std::vector<std::string>{timeseries_svg(table, sc)}
                                            : histogram_svgs(table);
    } else {
      fmt::print(err, "error: neither compare.csv nor results.csv found in {}\n", results_dir.string());
      return kBadInput;
    }

    fs::create_directories(dest);
    if (kind == PlotKind::kTimeseries) {
      write_text_file(dest / "timeseries.svg", files.front());
      fmt::print(log, "wrote {}\n", (dest / "timeseries.svg").string());
    } else {
      for (std::size_t k = 0; k < files.size(); ++k) {
        const fs::path p = dest / fmt::format("histogram_{}.svg", names[k]);
        write_text_file(p, files[k]);
        fmt::print(log, "wrote {}\n", p.string());
      }
    }
    return kSuccess;
  } catch (const std::runtime_error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kBadInput;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kFailure;
  }
}

int cmd_dump_lp(const fs::path& scenario_path, int slot, bool no_isl, std::ostream& out, std::ostream& err) {
  const auto scenario = load(scenario_path, err);
  if (!scenario) return kBadInput;
  if (slot < 0 || slot >= scenario->time.slot_count()) {
    fmt::print(err, "error: slot {} outside [0, {})\n", slot, scenario->time.slot_count());
    return kBadInput;
  }
  try {
    const SlotGeometry geometry = build_slot_geometry(scenario->constellation, scenario->ground_stations, slot,
                                                      scenario->time.slot_midpoint(slot));
    const bool isl = scenario->policies.isl_enabled && !no_isl;
    const SlotGraph graph = build_slot_graph(geometry, scenario->ground_stations, scenario->links,
                                             scenario->rain_events, scenario->policies.serving_gs, isl);
    BuildOptions options;
    options.distinct_relay_destination = scenario->policies.distinct_relay_destination;
    const MaxMinProblem problem = build_problem(graph, options);
    lp::write_lp_format(problem.lp, out);
    return kSuccess;
  } catch (const DegenerateSlotError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kDegenerate;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kFailure;
  }
}

}  // namespace meolb::cli
