#include "meolb/engine.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

namespace meolb {

namespace {

SlotResult evaluate_slot(const Scenario& s, bool isl_enabled, int n, const RunOptions& options) {
  SlotResult out;
  out.slot_index = n;
  out.time = s.time.slot_start(n);
  const SlotGeometry geometry =
      build_slot_geometry(s.constellation, s.ground_stations, n, s.time.slot_midpoint(n));
  out.graph = build_slot_graph(geometry, s.ground_stations, s.links, s.rain_events, s.policies.serving_gs,
                               isl_enabled);
  out.isolated = out.graph.isolated;
  if (out.graph.degenerate()) return out;

  BuildOptions build;
  build.distinct_relay_destination = s.policies.distinct_relay_destination;
  SlotAllocation a = allocate_slot(out.graph, s.policies.lexicographic, build, options.solve);
  out.lp_iterations = a.max_min.iteration_count + (a.refined ? a.refined->iteration_count : 0);
  out.allocation = std::move(a.allocation);
  return out;
}

double population_std(const std::vector<double>& v, double mean) {
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(v.size()));
}

double mean_of(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

Histogram make_histogram(const std::vector<double>& v, double bin_width) {
  Histogram h;
  h.bin_width = bin_width;
  if (v.empty()) return h;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double first = std::floor(*lo / bin_width);
  const double last = std::floor(*hi / bin_width);
  h.origin = first * bin_width;
  h.counts.assign(static_cast<std::size_t>(last - first) + 1, 0);
  for (double x : v) {
    const auto bin = static_cast<std::size_t>(std::floor(x / bin_width) - first);
    ++h.counts[std::min(bin, h.counts.size() - 1)];
  }
  return h;
}

double pct(double treatment, double baseline) { return 100.0 * (treatment - baseline) / baseline; }

}  // namespace

RunResult run(const Scenario& scenario, bool isl_enabled, const RunOptions& options) {
  scenario.validate();
  const int n_slots = scenario.time.slot_count();
  const std::size_t k_sats = static_cast<std::size_t>(scenario.constellation.satellite_count);

  RunResult result;
  result.scenario_name = scenario.name;
  result.isl_enabled = isl_enabled;
  result.grid = scenario.time;
  for (std::size_t k = 0; k < k_sats; ++k) result.satellite_names.push_back(scenario.constellation.name(k));
  for (const auto& gs : scenario.ground_stations) result.station_ids.push_back(gs.id);
  result.slots.resize(static_cast<std::size_t>(n_slots));

  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max(1, n_slots)));

  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_slots));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int n = next.fetch_add(1); n < n_slots; n = next.fetch_add(1)) {
      try {
        result.slots[static_cast<std::size_t>(n)] = evaluate_slot(scenario, isl_enabled, n, options);
      } catch (...) {
        errors[static_cast<std::size_t>(n)] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  result.series = Grid<double>(k_sats, static_cast<std::size_t>(n_slots), 0.0);
  for (const SlotResult& slot : result.slots) {
    if (slot.degenerate()) {
      result.degenerate_slots.push_back(slot.slot_index);
      continue;
    }
    for (std::size_t k = 0; k < k_sats; ++k) {
      result.series(k, static_cast<std::size_t>(slot.slot_index)) = slot.allocation->rates_bps[k];
    }
  }
  result.summary = summarize(result, options.histogram_bin_bps);
  return result;
}

RunSummary summarize(const Grid<double>& series, const std::vector<int>& degenerate_slots,
                     const std::vector<std::string>& satellite_names, const std::vector<double>& t_star_bps,
                     double bin_width_bps) {
  if (!(bin_width_bps > 0.0)) throw std::invalid_argument("histogram bin width must be > 0");
  const std::size_t k_sats = series.rows();
  const std::size_t n_slots = series.cols();
  std::vector<bool> skip(n_slots, false);
  for (int n : degenerate_slots) {
    if (n >= 0 && static_cast<std::size_t>(n) < n_slots) skip[static_cast<std::size_t>(n)] = true;
  }
  std::vector<std::size_t> valid;
  for (std::size_t n = 0; n < n_slots; ++n) {
    if (!skip[n]) valid.push_back(n);
  }

  RunSummary summary;
  ConstellationSummary& c = summary.constellation;
  std::vector<double> pooled;
  double std_sum = 0.0;
  for (std::size_t k = 0; k < k_sats; ++k) {
    SatelliteSummary s;
    s.name = k < satellite_names.size() ? satellite_names[k] : fmt::format("SAT{:02d}", k + 1);
    std::vector<double> v;
    for (std::size_t n : valid) v.push_back(series(k, n));
    s.samples = v.size();
    s.histogram.bin_width = bin_width_bps;
    if (!v.empty()) {
      s.mean_bps = mean_of(v);
      s.std_bps = population_std(v, s.mean_bps);
      s.min_bps = *std::min_element(v.begin(), v.end());
      s.max_bps = *std::max_element(v.begin(), v.end());
      s.histogram = make_histogram(v, bin_width_bps);
    }
    std_sum += s.std_bps;
    pooled.insert(pooled.end(), v.begin(), v.end());
    summary.satellites.push_back(std::move(s));
  }
  c.samples = pooled.size();
  if (pooled.empty()) return summary;

  c.min_bps = *std::min_element(pooled.begin(), pooled.end());
  c.mean_bps = mean_of(pooled);
  c.std_bps = population_std(pooled, c.mean_bps);
  c.mean_std_over_time_bps = std_sum / static_cast<double>(k_sats);
  double across = 0.0;
  double t_sum = 0.0;
  for (std::size_t n : valid) {
    std::vector<double> col;
    for (std::size_t k = 0; k < k_sats; ++k) col.push_back(series(k, n));
    across += population_std(col, mean_of(col));
    if (n < t_star_bps.size()) t_sum += t_star_bps[n];
  }
  c.mean_std_across_satellites_bps = across / static_cast<double>(valid.size());
  c.mean_t_star_bps = t_sum / static_cast<double>(valid.size());
  return summary;
}

RunSummary summarize(const RunResult& result, double bin_width_bps) {
  std::vector<double> t_star(result.slots.size(), 0.0);
  for (const SlotResult& slot : result.slots) {
    if (!slot.degenerate()) t_star[static_cast<std::size_t>(slot.slot_index)] = slot.allocation->t_star_bps;
  }
  return summarize(result.series, result.degenerate_slots, result.satellite_names, t_star, bin_width_bps);
}

ComparisonReport compare(const RunResult& baseline, const RunResult& treatment) {
  if (!(baseline.grid == treatment.grid) || baseline.series.rows() != treatment.series.rows() ||
      baseline.series.cols() != treatment.series.cols()) {
    throw std::invalid_argument("compare: runs use different time grids or satellite counts");
  }
  // Both arms are summarised over the slots that are valid in each of them.
  std::vector<int> skip = baseline.degenerate_slots;
  skip.insert(skip.end(), treatment.degenerate_slots.begin(), treatment.degenerate_slots.end());
  std::sort(skip.begin(), skip.end());
  skip.erase(std::unique(skip.begin(), skip.end()), skip.end());
  auto t_star = [](const RunResult& r) {
    std::vector<double> out(r.slots.size(), 0.0);
    for (const SlotResult& slot : r.slots) {
      if (!slot.degenerate()) out[static_cast<std::size_t>(slot.slot_index)] = slot.allocation->t_star_bps;
    }
    return out;
  };
  const double bin = baseline.summary.satellites.empty() ? 5e6 : baseline.summary.satellites[0].histogram.bin_width;
  ComparisonReport report;
  report.common_degenerate_slots = skip;
  report.baseline = summarize(baseline.series, skip, baseline.satellite_names, t_star(baseline), bin);
  report.treatment = summarize(treatment.series, skip, treatment.satellite_names, t_star(treatment), bin);
  const ConstellationSummary& b = report.baseline.constellation;
  const ConstellationSummary& t = report.treatment.constellation;
  if (b.samples == 0 || !(b.min_bps > 0.0)) {
    throw std::invalid_argument("compare: baseline minimum rate must be > 0");
  }
  report.min_rate_improvement_pct = pct(t.min_bps, b.min_bps);
  report.mean_delta_pct = pct(t.mean_bps, b.mean_bps);

  double var_b = 0.0;
  double var_t = 0.0;
  for (std::size_t k = 0; k < report.baseline.satellites.size(); ++k) {
    const double sb = report.baseline.satellites[k].std_bps;
    const double st = report.treatment.satellites[k].std_bps;
    report.std_ratio.push_back(sb > 0.0 ? st / sb : (st > 0.0 ? std::numeric_limits<double>::infinity() : 1.0));
    var_b += sb * sb;
    var_t += st * st;
  }
  if (b.mean_std_over_time_bps > 0.0) {
    report.std_reduction_pct = -pct(t.mean_std_over_time_bps, b.mean_std_over_time_bps);
  }
  if (var_b > 0.0) report.variance_reduction_pct = -pct(var_t, var_b);
  return report;
}

}  // namespace meolb
