#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "meolb/channel.hpp"
#include "meolb/geometry.hpp"

namespace meolb {

enum class ServingPolicy { kBestCapacity, kLpFractional };

std::string_view to_string(ServingPolicy policy);
ServingPolicy parse_serving_policy(std::string_view text);

struct LinkParams {
  FeederLinkParams feeder;
  RainModelParams rain;
  IslParams isl;
  bool operator==(const LinkParams&) const = default;
};

/// Per-slot capacity graph. Capacities are in bit/s; an FL entry is 0 when the
/// satellite does not see the station or the edge is masked by the policy.
struct SlotGraph {
  int slot_index = 0;
  TimePoint time{};
  Grid<double> fl_capacity;                   // K×I
  Grid<double> isl_capacity;                  // K×K, ring edges only
  std::vector<std::vector<int>> neighbors;    // L_k: ring neighbours with a usable ISL
  std::vector<std::vector<int>> reachable_gs; // J_k: stations reachable through one ISL hop
  std::vector<std::optional<int>> serving_gs;
  std::vector<int> isolated;                  // satellites with no route to any station
  ServingPolicy policy = ServingPolicy::kBestCapacity;

  std::size_t satellite_count() const { return fl_capacity.rows(); }
  std::size_t station_count() const { return fl_capacity.cols(); }
  bool degenerate() const { return !isolated.empty(); }
  bool operator==(const SlotGraph&) const = default;
};

/// Largest rain rate of the events that cover `t` at station `gs_id` (0 when dry).
double active_rain_rate(std::span<const RainEvent> events, std::string_view gs_id, TimePoint t);

/// Indices of the ring neighbours of k (k±1 mod K, deduplicated, ascending).
std::vector<int> ring_neighbors(int k, int satellite_count);

SlotGraph build_slot_graph(const SlotGeometry& geometry, std::span<const GroundStationSpec> stations,
                           const LinkParams& links, std::span<const RainEvent> rain_events,
                           ServingPolicy policy, bool isl_enabled);

/// best-capacity keeps only argmax_i c_{k,i} (lowest index on ties); lp-fractional keeps
/// every edge and only records the argmax as serving station.
SlotGraph select_serving_gs(SlotGraph graph, ServingPolicy policy);

/// Recomputes L_k, J_k and the isolated list from the capacity tables.
void refresh_reachability(SlotGraph& graph);

}  // namespace meolb
