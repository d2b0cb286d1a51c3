#include "meolb/topology.hpp"

#include <algorithm>
#include <stdexcept>

namespace meolb {

std::string_view to_string(ServingPolicy policy) {
  return policy == ServingPolicy::kBestCapacity ? "best-capacity" : "lp-fractional";
}

ServingPolicy parse_serving_policy(std::string_view text) {
  if (text == "best-capacity") return ServingPolicy::kBestCapacity;
  if (text == "lp-fractional") return ServingPolicy::kLpFractional;
  throw std::invalid_argument("unknown serving policy '" + std::string(text) +
                              "' (expected best-capacity or lp-fractional)");
}

double active_rain_rate(std::span<const RainEvent> events, std::string_view gs_id, TimePoint t) {
  double rate = 0.0;
  for (const auto& e : events) {
    if (e.gs_id == gs_id && e.covers(t)) rate = std::max(rate, e.rain_rate_mmh);
  }
  return rate;
}

std::vector<int> ring_neighbors(int k, int satellite_count) {
  std::vector<int> out{(k + satellite_count - 1) % satellite_count, (k + 1) % satellite_count};
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  std::erase(out, k);
  return out;
}

void refresh_reachability(SlotGraph& graph) {
  const int k_count = static_cast<int>(graph.satellite_count());
  const std::size_t i_count = graph.station_count();
  graph.neighbors.assign(static_cast<std::size_t>(k_count), {});
  graph.reachable_gs.assign(static_cast<std::size_t>(k_count), {});
  graph.isolated.clear();

  for (int k = 0; k < k_count; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    for (int l : ring_neighbors(k, k_count)) {
      if (graph.isl_capacity(ku, static_cast<std::size_t>(l)) > 0.0) graph.neighbors[ku].push_back(l);
    }
    auto& reach = graph.reachable_gs[ku];
    for (int l : graph.neighbors[ku]) {
      for (std::size_t j = 0; j < i_count; ++j) {
        if (graph.fl_capacity(static_cast<std::size_t>(l), j) > 0.0) reach.push_back(static_cast<int>(j));
      }
    }
    std::sort(reach.begin(), reach.end());
    reach.erase(std::unique(reach.begin(), reach.end()), reach.end());

    bool direct = false;
    for (std::size_t i = 0; i < i_count; ++i) direct = direct || graph.fl_capacity(ku, i) > 0.0;
    if (!direct && reach.empty()) graph.isolated.push_back(k);
  }
}

SlotGraph build_slot_graph(const SlotGeometry& geometry, std::span<const GroundStationSpec> stations,
                           const LinkParams& links, std::span<const RainEvent> rain_events,
                           ServingPolicy policy, bool isl_enabled) {
  const std::size_t k_count = geometry.satellite_count();
  const std::size_t i_count = geometry.station_count();
  if (stations.size() != i_count) throw std::invalid_argument("station list does not match geometry");

  SlotGraph graph;
  graph.slot_index = geometry.slot_index;
  graph.time = geometry.time;
  graph.fl_capacity = Grid<double>(k_count, i_count);
  graph.isl_capacity = Grid<double>(k_count, k_count);

  for (std::size_t i = 0; i < i_count; ++i) {
    const double rain_rate = active_rain_rate(rain_events, stations[i].id, geometry.time);
    for (std::size_t k = 0; k < k_count; ++k) {
      if (!geometry.is_visible(k, i)) continue;
      const channel::FeederLinkConditions link{geometry.distances_fl(k, i), geometry.elevations(k, i),
                                               rain_rate, stations[i].altitude_m / 1000.0,
                                               geometry.off_nadir(k, i)};
      graph.fl_capacity(k, i) = channel::fl_capacity_bps(link, links.feeder, links.rain);
    }
  }

  if (isl_enabled) {
    const int kc = static_cast<int>(k_count);
    for (int k = 0; k < kc; ++k) {
      for (int l : ring_neighbors(k, kc)) {
        const auto ku = static_cast<std::size_t>(k);
        const auto lu = static_cast<std::size_t>(l);
        graph.isl_capacity(ku, lu) = channel::isl_capacity(geometry.distances_isl(ku, lu), links.isl);
      }
    }
  }

  return select_serving_gs(std::move(graph), policy);
}

SlotGraph select_serving_gs(SlotGraph graph, ServingPolicy policy) {
  const std::size_t k_count = graph.satellite_count();
  const std::size_t i_count = graph.station_count();
  graph.policy = policy;
  graph.serving_gs.assign(k_count, std::nullopt);
  for (std::size_t k = 0; k < k_count; ++k) {
    double best = 0.0;
    for (std::size_t i = 0; i < i_count; ++i) {
      if (graph.fl_capacity(k, i) > best) {
        best = graph.fl_capacity(k, i);
        graph.serving_gs[k] = static_cast<int>(i);
      }
    }
    if (policy == ServingPolicy::kBestCapacity && graph.serving_gs[k]) {
      for (std::size_t i = 0; i < i_count; ++i) {
        if (static_cast<int>(i) != *graph.serving_gs[k]) graph.fl_capacity(k, i) = 0.0;
      }
    }
  }
  refresh_reachability(graph);
  return graph;
}

}  // namespace meolb
