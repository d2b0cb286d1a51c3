#include "meolb/report.hpp"

#include <fmt/format.h>

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>

namespace meolb {

using nlohmann::json;

namespace {

std::string header(std::span<const char* const> columns) {
  std::string h;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c > 0) h += ',';
    h += columns[c];
  }
  return h;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream s(line);
  while (std::getline(s, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& text, std::size_t line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) {
    throw std::runtime_error(fmt::format("line {}: '{}' is not a number", line_no, text));
  }
  return v;
}

/// Reads rows keyed by (slot, satellite) and grows the name/time tables as they appear.
template <class OnRow>
void scan_rows(std::istream& in, std::span<const char* const> columns, OnRow on_row) {
  std::string line;
  if (!std::getline(in, line) || line != header(columns)) {
    throw std::runtime_error("unexpected CSV header (want: " + header(columns) + ")");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != columns.size()) {
      throw std::runtime_error(fmt::format("line {}: expected {} fields, got {}", line_no, columns.size(),
                                           fields.size()));
    }
    on_row(fields, line_no);
  }
}

struct Layout {
  std::vector<std::string> names;
  std::map<std::string, std::size_t> name_index;
  std::vector<std::string> times;

  std::size_t satellite(const std::string& name) {
    auto [it, inserted] = name_index.emplace(name, names.size());
    if (inserted) names.push_back(name);
    return it->second;
  }
  std::size_t slot(const std::string& text, const std::string& time, std::size_t line_no) {
    const auto n = static_cast<std::size_t>(parse_double(text, line_no));
    if (n >= times.size()) times.resize(n + 1);
    times[n] = time;
    return n;
  }
};

json histogram_to_json(const Histogram& h) {
  return {{"bin_width_bps", h.bin_width}, {"origin_bps", h.origin}, {"counts", h.counts}};
}

}  // namespace

void write_results_csv(std::ostream& out, const RunResult& result) {
  out << header(kResultsColumns) << '\n';
  for (const SlotResult& slot : result.slots) {
    const std::string time = format_timestamp(slot.time);
    const std::size_t k_sats = result.satellite_names.size();
    std::vector<double> out_bps(k_sats, 0.0);
    std::vector<double> in_bps(k_sats, 0.0);
    if (!slot.degenerate()) {
      for (const RelayFlow& f : slot.allocation->relays) {
        out_bps[static_cast<std::size_t>(f.source)] += f.rate_bps;
        in_bps[static_cast<std::size_t>(f.via)] += f.rate_bps;
      }
    }
    for (std::size_t k = 0; k < k_sats; ++k) {
      const auto& serving = slot.graph.serving_gs[k];
      const std::string gs = serving ? result.station_ids[static_cast<std::size_t>(*serving)] : "";
      const double rate = slot.degenerate() ? 0.0 : slot.allocation->rates_bps[k];
      const double direct = slot.degenerate() ? 0.0 : slot.allocation->direct_bps[k];
      const double t_star = slot.degenerate() ? 0.0 : slot.allocation->t_star_bps;
      out << fmt::format("{},{},{},{},{},{},{},{},{},{}\n", slot.slot_index, time, result.satellite_names[k], rate,
                         gs, direct, out_bps[k], in_bps[k], t_star, slot.degenerate() ? 1 : 0);
    }
  }
}

void write_combined_csv(std::ostream& out, const RunResult& baseline, const RunResult& treatment) {
  if (baseline.slots.size() != treatment.slots.size() ||
      baseline.satellite_names.size() != treatment.satellite_names.size()) {
    throw std::invalid_argument("combined CSV needs runs on the same grid");
  }
  out << header(kCombinedColumns) << '\n';
  for (std::size_t n = 0; n < baseline.slots.size(); ++n) {
    const std::string time = format_timestamp(baseline.slots[n].time);
    for (std::size_t k = 0; k < baseline.satellite_names.size(); ++k) {
      out << fmt::format("{},{},{},{},{},{},{}\n", n, time, baseline.satellite_names[k], baseline.series(k, n),
                         treatment.series(k, n), baseline.slots[n].degenerate() ? 1 : 0,
                         treatment.slots[n].degenerate() ? 1 : 0);
    }
  }
}

json summary_to_json(const RunSummary& summary) {
  json sats = json::array();
  for (const SatelliteSummary& s : summary.satellites) {
    sats.push_back({{"name", s.name},
                    {"samples", s.samples},
                    {"mean_bps", s.mean_bps},
                    {"std_bps", s.std_bps},
                    {"min_bps", s.min_bps},
                    {"max_bps", s.max_bps},
                    {"histogram", histogram_to_json(s.histogram)}});
  }
  const ConstellationSummary& c = summary.constellation;
  return {{"satellites", sats},
          {"constellation",
           {{"samples", c.samples},
            {"min_bps", c.min_bps},
            {"mean_bps", c.mean_bps},
            {"std_bps", c.std_bps},
            {"mean_std_over_time_bps", c.mean_std_over_time_bps},
            {"mean_std_across_satellites_bps", c.mean_std_across_satellites_bps},
            {"mean_t_star_bps", c.mean_t_star_bps}}}};
}

RunSummary summary_from_json(const json& doc) {
  RunSummary summary;
  for (const json& s : doc.at("satellites")) {
    SatelliteSummary out;
    out.name = s.at("name").get<std::string>();
    out.samples = s.at("samples").get<std::size_t>();
    out.mean_bps = s.at("mean_bps").get<double>();
    out.std_bps = s.at("std_bps").get<double>();
    out.min_bps = s.at("min_bps").get<double>();
    out.max_bps = s.at("max_bps").get<double>();
    const json& h = s.at("histogram");
    out.histogram.bin_width = h.at("bin_width_bps").get<double>();
    out.histogram.origin = h.at("origin_bps").get<double>();
    out.histogram.counts = h.at("counts").get<std::vector<std::size_t>>();
    summary.satellites.push_back(std::move(out));
  }
  const json& c = doc.at("constellation");
  ConstellationSummary& o = summary.constellation;
  o.samples = c.at("samples").get<std::size_t>();
  o.min_bps = c.at("min_bps").get<double>();
  o.mean_bps = c.at("mean_bps").get<double>();
  o.std_bps = c.at("std_bps").get<double>();
  o.mean_std_over_time_bps = c.at("mean_std_over_time_bps").get<double>();
  o.mean_std_across_satellites_bps = c.at("mean_std_across_satellites_bps").get<double>();
  o.mean_t_star_bps = c.at("mean_t_star_bps").get<double>();
  return summary;
}

json run_to_json(const RunResult& result) {
  return {{"scenario", result.scenario_name},
          {"isl_enabled", result.isl_enabled},
          {"slot_count", result.slots.size()},
          {"slot_s", result.grid.slot_s},
          {"start", format_timestamp(result.grid.start)},
          {"satellites", result.satellite_names},
          {"ground_stations", result.station_ids},
          {"degenerate_slots", result.degenerate_slots},
          {"summary", summary_to_json(result.summary)}};
}

json allocations_to_json(const RunResult& result) {
  json slots = json::array();
  const auto& names = result.satellite_names;
  const auto& ids = result.station_ids;
  for (const SlotResult& slot : result.slots) {
    const SlotGraph& g = slot.graph;
    const AllocationResult* a = slot.degenerate() ? nullptr : &*slot.allocation;
    json entry = {{"slot", slot.slot_index}, {"time", format_timestamp(slot.time)}, {"degenerate", slot.degenerate()}};
    json isolated = json::array();
    for (int k : slot.isolated) isolated.push_back(names[static_cast<std::size_t>(k)]);
    entry["isolated"] = isolated;
    entry["t_star_bps"] = a ? a->t_star_bps : 0.0;

    json sats = json::array();
    for (std::size_t k = 0; k < g.satellite_count(); ++k) {
      const auto& serving = g.serving_gs[k];
      sats.push_back({{"satellite", names[k]},
                      {"serving_gs", serving ? json(ids[static_cast<std::size_t>(*serving)]) : json(nullptr)},
                      {"rate_bps", a ? a->rates_bps[k] : 0.0},
                      {"direct_bps", a ? a->direct_bps[k] : 0.0}});
    }
    entry["satellites"] = sats;

    json fl = json::array();
    for (std::size_t k = 0; k < g.satellite_count(); ++k) {
      for (std::size_t i = 0; i < g.station_count(); ++i) {
        if (!(g.fl_capacity(k, i) > 0.0)) continue;
        fl.push_back({{"satellite", names[k]},
                      {"gs", ids[i]},
                      {"capacity_bps", g.fl_capacity(k, i)},
                      {"direct_fraction", a ? a->direct_fraction(k, i) : 0.0},
                      {"fraction", a ? a->fl_fraction(k, i) : 0.0},
                      {"rate_bps", a ? a->fl_rate_bps(k, i) : 0.0}});
      }
    }
    entry["feeder_links"] = fl;

    json isl = json::array();
    const int k_sats = static_cast<int>(g.satellite_count());
    for (int k = 0; k < k_sats; ++k) {
      for (int l : ring_neighbors(k, k_sats)) {
        const auto ku = static_cast<std::size_t>(k);
        const auto lu = static_cast<std::size_t>(l);
        isl.push_back({{"from", names[ku]},
                       {"to", names[lu]},
                       {"capacity_bps", g.isl_capacity(ku, lu)},
                       {"fraction", a ? a->isl_fraction(ku, lu) : 0.0},
                       {"rate_bps", a ? a->isl_rate_bps(ku, lu) : 0.0}});
      }
    }
    entry["isl"] = isl;

    json relays = json::array();
    if (a) {
      for (const RelayFlow& f : a->relays) {
        relays.push_back({{"source", names[static_cast<std::size_t>(f.source)]},
                          {"via", names[static_cast<std::size_t>(f.via)]},
                          {"gs", ids[static_cast<std::size_t>(f.station)]},
                          {"isl_fraction", f.isl_fraction},
                          {"fl_fraction", f.fl_fraction},
                          {"rate_bps", f.rate_bps}});
      }
    }
    entry["relays"] = relays;
    slots.push_back(std::move(entry));
  }
  return {{"scenario", result.scenario_name}, {"isl_enabled", result.isl_enabled}, {"slots", slots}};
}

json comparison_to_json(const ComparisonReport& report) {
  json per_sat = json::array();
  for (std::size_t k = 0; k < report.std_ratio.size(); ++k) {
    per_sat.push_back({{"name", report.baseline.satellites[k].name},
                       {"baseline_std_bps", report.baseline.satellites[k].std_bps},
                       {"isl_std_bps", report.treatment.satellites[k].std_bps},
                       {"std_ratio", report.std_ratio[k]}});
  }
  return {{"min_rate_improvement_pct", report.min_rate_improvement_pct},
          {"mean_delta_pct", report.mean_delta_pct},
          {"std_reduction_pct", report.std_reduction_pct},
          {"variance_reduction_pct", report.variance_reduction_pct},
          {"per_satellite", per_sat},
          {"excluded_slots", report.common_degenerate_slots},
          {"baseline", summary_to_json(report.baseline)},
          {"isl", summary_to_json(report.treatment)}};
}

SeriesTable read_results_csv(std::istream& in) {
  Layout layout;
  struct Row {
    std::size_t slot, sat;
    double rate, t_star;
    bool degenerate;
  };
  std::vector<Row> rows;
  scan_rows(in, kResultsColumns, [&](const std::vector<std::string>& f, std::size_t line_no) {
    Row r;
    r.slot = layout.slot(f[0], f[1], line_no);
    r.sat = layout.satellite(f[2]);
    r.rate = parse_double(f[3], line_no);
    r.t_star = parse_double(f[8], line_no);
    r.degenerate = f[9] == "1";
    rows.push_back(r);
  });
  SeriesTable t;
  t.satellite_names = layout.names;
  t.times = layout.times;
  t.series = Grid<double>(layout.names.size(), layout.times.size(), 0.0);
  t.t_star_bps.assign(layout.times.size(), 0.0);
  std::vector<bool> degenerate(layout.times.size(), false);
  for (const Row& r : rows) {
    t.series(r.sat, r.slot) = r.rate;
    t.t_star_bps[r.slot] = r.t_star;
    if (r.degenerate) degenerate[r.slot] = true;
  }
  for (std::size_t n = 0; n < degenerate.size(); ++n) {
    if (degenerate[n]) t.degenerate_slots.push_back(static_cast<int>(n));
  }
  return t;
}

CombinedTable read_combined_csv(std::istream& in) {
  Layout layout;
  struct Row {
    std::size_t slot, sat;
    double b, t;
    bool bd, td;
  };
  std::vector<Row> rows;
  scan_rows(in, kCombinedColumns, [&](const std::vector<std::string>& f, std::size_t line_no) {
    rows.push_back({layout.slot(f[0], f[1], line_no), layout.satellite(f[2]), parse_double(f[3], line_no),
                    parse_double(f[4], line_no), f[5] == "1", f[6] == "1"});
  });
  CombinedTable t;
  t.satellite_names = layout.names;
  t.times = layout.times;
  t.baseline = Grid<double>(layout.names.size(), layout.times.size(), 0.0);
  t.treatment = t.baseline;
  std::vector<bool> bd(layout.times.size(), false);
  std::vector<bool> td(layout.times.size(), false);
  for (const Row& r : rows) {
    t.baseline(r.sat, r.slot) = r.b;
    t.treatment(r.sat, r.slot) = r.t;
    if (r.bd) bd[r.slot] = true;
    if (r.td) td[r.slot] = true;
  }
  for (std::size_t n = 0; n < bd.size(); ++n) {
    if (bd[n]) t.baseline_degenerate.push_back(static_cast<int>(n));
    if (td[n]) t.treatment_degenerate.push_back(static_cast<int>(n));
  }
  return t;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_json_file(const std::filesystem::path& path, const json& doc) { write_text_file(path, doc.dump(2) + "\n"); }

}  // namespace meolb
