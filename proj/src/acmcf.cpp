#include "meolb/acmcf.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace meolb {

using lp::LinearTerm;
using lp::RowSense;
using lp::VariableKind;
using lp::VariableTag;

DegenerateSlotError::DegenerateSlotError(int slot_index, std::vector<int> isolated)
    : std::runtime_error(fmt::format("slot {}: {} satellite(s) have no route to any ground station", slot_index,
                                     isolated.size())),
      isolated_(std::move(isolated)) {}

MaxMinProblem build_problem(const SlotGraph& graph, const BuildOptions& options) {
  if (graph.degenerate()) throw DegenerateSlotError(graph.slot_index, graph.isolated);

  MaxMinProblem p;
  p.unit_bps = options.capacity_unit_bps;
  p.satellite_count = graph.satellite_count();
  p.station_count = graph.station_count();
  const auto k_count = static_cast<int>(p.satellite_count);
  const auto i_count = static_cast<int>(p.station_count);
  auto fl = [&](int k, int i) { return graph.fl_capacity(static_cast<std::size_t>(k), static_cast<std::size_t>(i)) / p.unit_bps; };
  auto isl = [&](int k, int l) { return graph.isl_capacity(static_cast<std::size_t>(k), static_cast<std::size_t>(l)) / p.unit_bps; };

  auto& lp = p.lp;
  p.t_col = lp.add_variable({VariableKind::kEpigraph}, 0.0, lp::kInfinity, 1.0);
  for (int k = 0; k < k_count; ++k) {
    p.rate_cols.push_back(lp.add_variable({VariableKind::kRate, k}, 0.0, lp::kInfinity));
  }
  for (int k = 0; k < k_count; ++k) {
    for (int i = 0; i < i_count; ++i) {
      if (fl(k, i) > 0.0) {
        p.direct.push_back({k, i, lp.add_variable({VariableKind::kDirectFraction, k, k, i}, 0.0, 1.0)});
      }
    }
  }
  for (int k = 0; k < k_count; ++k) {
    const auto& serving = graph.serving_gs[static_cast<std::size_t>(k)];
    for (int l : graph.neighbors[static_cast<std::size_t>(k)]) {
      for (int j = 0; j < i_count; ++j) {
        if (!(fl(l, j) > 0.0)) continue;
        if (options.distinct_relay_destination && serving && *serving == j) continue;
        Commodity c{k, l, j};
        c.isl_fraction_col = lp.add_variable({VariableKind::kRelayIslFraction, k, l, j}, 0.0, 1.0);
        c.fl_fraction_col = lp.add_variable({VariableKind::kRelayFlFraction, k, l, j}, 0.0, 1.0);
        c.throughput_col = lp.add_variable({VariableKind::kRelayThroughput, k, l, j}, 0.0, lp::kInfinity);
        p.commodities.push_back(c);
      }
    }
  }

  // R_k = direct + relayed
  for (int k = 0; k < k_count; ++k) {
    std::vector<LinearTerm> terms{{p.rate_cols[static_cast<std::size_t>(k)], 1.0}};
    for (const auto& d : p.direct) {
      if (d.satellite == k) terms.push_back({d.fraction_col, -fl(d.satellite, d.station)});
    }
    for (const auto& c : p.commodities) {
      if (c.source == k) terms.push_back({c.throughput_col, -1.0});
    }
    lp.add_row(std::move(terms), RowSense::kEqual, 0.0, fmt::format("rate_{}", k));
  }
  // r = v c_ISL and r = w c_FL
  for (const auto& c : p.commodities) {
    lp.add_row({{c.throughput_col, 1.0}, {c.isl_fraction_col, -isl(c.source, c.via)}}, RowSense::kEqual, 0.0,
               fmt::format("isl_tp_{}_{}_{}", c.source, c.via, c.station));
    lp.add_row({{c.throughput_col, 1.0}, {c.fl_fraction_col, -fl(c.via, c.station)}}, RowSense::kEqual, 0.0,
               fmt::format("fl_tp_{}_{}_{}", c.source, c.via, c.station));
  }
  // sum of fractions on each physical FL <= 1
  for (const auto& d : p.direct) {
    std::vector<LinearTerm> terms{{d.fraction_col, 1.0}};
    for (const auto& c : p.commodities) {
      if (c.via == d.satellite && c.station == d.station) terms.push_back({c.fl_fraction_col, 1.0});
    }
    lp.add_row(std::move(terms), RowSense::kLessEqual, 1.0, fmt::format("fl_cap_{}_{}", d.satellite, d.station));
  }
  // sum of fractions on each directed ISL <= 1
  for (int k = 0; k < k_count; ++k) {
    for (int l : graph.neighbors[static_cast<std::size_t>(k)]) {
      std::vector<LinearTerm> terms;
      for (const auto& c : p.commodities) {
        if (c.source == k && c.via == l) terms.push_back({c.isl_fraction_col, 1.0});
      }
      if (terms.size() > 1) lp.add_row(std::move(terms), RowSense::kLessEqual, 1.0, fmt::format("isl_cap_{}_{}", k, l));
    }
  }
  // t <= R_k
  for (int k = 0; k < k_count; ++k) {
    lp.add_row({{p.t_col, 1.0}, {p.rate_cols[static_cast<std::size_t>(k)], -1.0}}, RowSense::kLessEqual, 0.0,
               fmt::format("epi_{}", k));
  }
  return p;
}

lp::LpSolution lexicographic_refine(const MaxMinProblem& problem, double t_star, const lp::SolveOptions& options) {
  lp::LpProblem stage2 = problem.lp;
  std::fill(stage2.objective.begin(), stage2.objective.end(), 0.0);
  for (int col : problem.rate_cols) stage2.objective[static_cast<std::size_t>(col)] = 1.0;
  const auto t = static_cast<std::size_t>(problem.t_col);
  stage2.lower[t] = std::max(0.0, t_star - 1e-9 * std::max(1.0, std::abs(t_star)));
  return lp::solve(stage2, options);
}

AllocationResult decode(const MaxMinProblem& problem, const lp::LpSolution& solution, const SlotGraph& graph) {
  const std::size_t k_count = problem.satellite_count;
  const std::size_t i_count = problem.station_count;
  const auto& x = solution.values;
  auto value = [&](int col) { return x.empty() ? 0.0 : x[static_cast<std::size_t>(col)]; };

  AllocationResult out;
  out.rates_bps.assign(k_count, 0.0);
  out.direct_bps.assign(k_count, 0.0);
  out.direct_fraction = Grid<double>(k_count, i_count);
  out.fl_fraction = Grid<double>(k_count, i_count);
  out.fl_rate_bps = Grid<double>(k_count, i_count);
  out.isl_fraction = Grid<double>(k_count, k_count);
  out.isl_rate_bps = Grid<double>(k_count, k_count);

  for (std::size_t k = 0; k < k_count; ++k) out.rates_bps[k] = value(problem.rate_cols[k]) * problem.unit_bps;
  for (const auto& d : problem.direct) {
    const auto k = static_cast<std::size_t>(d.satellite);
    const auto i = static_cast<std::size_t>(d.station);
    const double w = value(d.fraction_col);
    out.direct_fraction(k, i) = w;
    out.fl_fraction(k, i) += w;
    out.direct_bps[k] += w * graph.fl_capacity(k, i);
  }
  for (const auto& c : problem.commodities) {
    RelayFlow flow{c.source, c.via, c.station, value(c.isl_fraction_col), value(c.fl_fraction_col),
                   value(c.throughput_col) * problem.unit_bps};
    const auto l = static_cast<std::size_t>(c.via);
    out.fl_fraction(l, static_cast<std::size_t>(c.station)) += flow.fl_fraction;
    out.isl_fraction(static_cast<std::size_t>(c.source), l) += flow.isl_fraction;
    out.relays.push_back(flow);
  }
  for (std::size_t k = 0; k < k_count; ++k) {
    for (std::size_t i = 0; i < i_count; ++i) out.fl_rate_bps(k, i) = out.fl_fraction(k, i) * graph.fl_capacity(k, i);
    for (std::size_t l = 0; l < k_count; ++l) out.isl_rate_bps(k, l) = out.isl_fraction(k, l) * graph.isl_capacity(k, l);
  }
  out.t_star_bps = k_count == 0 ? 0.0 : *std::min_element(out.rates_bps.begin(), out.rates_bps.end());
  return out;
}

SlotAllocation allocate_slot(const SlotGraph& graph, bool lexicographic, const BuildOptions& options,
                             const lp::SolveOptions& solve_options) {
  const MaxMinProblem problem = build_problem(graph, options);
  SlotAllocation out;
  out.max_min = lp::solve(problem.lp, solve_options);
  if (out.max_min.status != lp::LpStatus::kOptimal) {
    throw std::runtime_error(fmt::format("slot {}: max-min LP is {}", graph.slot_index,
                                         lp::to_string(out.max_min.status)));
  }
  const lp::LpSolution* chosen = &out.max_min;
  if (lexicographic) {
    out.refined = lexicographic_refine(problem, out.max_min.values[static_cast<std::size_t>(problem.t_col)],
                                       solve_options);
    if (out.refined->status == lp::LpStatus::kOptimal) chosen = &*out.refined;
  }
  out.allocation = decode(problem, *chosen, graph);
  return out;
}

}  // namespace meolb
