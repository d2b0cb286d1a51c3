#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "meolb/simplex.hpp"
#include "meolb/topology.hpp"

namespace meolb {

struct BuildOptions {
  /// Literal reading of the relay sum "j != i": forbid relaying to the source's own serving GS.
  bool distinct_relay_destination = false;
  /// Capacities are divided by this inside the LP (Mbit/s keeps the tableau well scaled).
  double capacity_unit_bps = 1e6;
};

/// One-hop relay commodity: data of `source` crosses ISL source→via and lands on via's FL to `station`.
struct Commodity {
  int source = 0;
  int via = 0;
  int station = 0;
  int isl_fraction_col = -1;  // v
  int fl_fraction_col = -1;   // w
  int throughput_col = -1;    // r = v c_ISL = w c_FL
};

struct DirectLink {
  int satellite = 0;
  int station = 0;
  int fraction_col = -1;
};

struct MaxMinProblem {
  lp::LpProblem lp;
  int t_col = -1;
  std::vector<int> rate_cols;
  std::vector<DirectLink> direct;
  std::vector<Commodity> commodities;
  double unit_bps = 1e6;
  std::size_t satellite_count = 0;
  std::size_t station_count = 0;
};

class DegenerateSlotError : public std::runtime_error {
 public:
  DegenerateSlotError(int slot_index, std::vector<int> isolated);
  const std::vector<int>& isolated() const { return isolated_; }

 private:
  std::vector<int> isolated_;
};

/// Encodes max t s.t. t <= R_k, R_k = direct + sum of relayed throughputs, relay
/// throughput bounded by both its ISL and FL share, per-FL and per-ISL fraction sums <= 1.
/// Throws DegenerateSlotError when the graph has isolated satellites.
MaxMinProblem build_problem(const SlotGraph& graph, const BuildOptions& options = {});

/// Second stage: maximise sum_k R_k with t held at `t_star` (LP units) up to 1e-9 relative.
lp::LpSolution lexicographic_refine(const MaxMinProblem& problem, double t_star,
                                    const lp::SolveOptions& options = {});

struct RelayFlow {
  int source = 0;
  int via = 0;
  int station = 0;
  double isl_fraction = 0.0;
  double fl_fraction = 0.0;
  double rate_bps = 0.0;
  bool operator==(const RelayFlow&) const = default;
};

struct AllocationResult {
  double t_star_bps = 0.0;
  std::vector<double> rates_bps;        // R_k
  std::vector<double> direct_bps;       // own traffic on own FL(s)
  std::vector<RelayFlow> relays;
  Grid<double> direct_fraction;         // w^{(k,i)}_{k,i}
  Grid<double> fl_fraction;             // aggregate w_{k,i}
  Grid<double> fl_rate_bps;             // r^FL_{k,i}
  Grid<double> isl_fraction;            // v_{k,l}
  Grid<double> isl_rate_bps;            // r^ISL_{k,l}

  bool operator==(const AllocationResult&) const = default;
};

AllocationResult decode(const MaxMinProblem& problem, const lp::LpSolution& solution, const SlotGraph& graph);

struct SlotAllocation {
  lp::LpSolution max_min;
  std::optional<lp::LpSolution> refined;
  AllocationResult allocation;
};

/// build → solve → (refine) → decode for one slot.
SlotAllocation allocate_slot(const SlotGraph& graph, bool lexicographic, const BuildOptions& options = {},
                             const lp::SolveOptions& solve_options = {});

}  // namespace meolb
