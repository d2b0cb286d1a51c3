#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace meolb::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct LinearTerm {
  int column = 0;
  double coefficient = 0.0;
};

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };

/// Semantic label of an LP column. `source` is the satellite whose data the column
/// carries, `via` the satellite that owns the physical feeder link, `station` the GS.
enum class VariableKind {
  kGeneric,
  kEpigraph,          // t
  kRate,              // R_k
  kDirectFraction,    // w^{(k,i)}_{k,i}
  kRelayIslFraction,  // v^{(k,j)}_{k,l}
  kRelayFlFraction,   // w^{(k,j)}_{l,j}
  kRelayThroughput,   // r^{(k,j)} through l
};

struct VariableTag {
  VariableKind kind = VariableKind::kGeneric;
  int source = -1;
  int via = -1;
  int station = -1;

  std::string label(int column) const;
  bool operator==(const VariableTag&) const = default;
};

/// Linear program in "maximize objective·x" form with per-row senses and per-column bounds.
struct LpProblem {
  std::vector<double> objective;
  std::vector<std::vector<LinearTerm>> rows;
  std::vector<RowSense> senses;
  std::vector<double> rhs;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<VariableTag> tags;
  std::vector<std::string> row_names;

  int add_variable(VariableTag tag, double lo, double hi, double objective_coefficient = 0.0);
  int add_row(std::vector<LinearTerm> terms, RowSense sense, double rhs_value, std::string name = {});

  std::size_t variable_count() const { return objective.size(); }
  std::size_t row_count() const { return rows.size(); }

  /// Throws std::invalid_argument on non-finite rhs, lo > hi, bad column indices or
  /// duplicate non-generic tags.
  void validate() const;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

std::string to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double objective_value = 0.0;
  std::vector<double> values;
  std::int64_t iteration_count = 0;
};

struct SolveOptions {
  /// Pivot cap over both phases; default 10·(rows + cols) of the standard-form tableau.
  std::optional<std::int64_t> max_iterations;
  double pivot_tolerance = 1e-9;
  double feasibility_tolerance = 1e-8;
};

class LpIterationLimit : public std::runtime_error {
 public:
  LpIterationLimit(std::int64_t limit, std::int64_t rows, std::int64_t cols);
  std::int64_t limit() const { return limit_; }

 private:
  std::int64_t limit_;
};

/// Two-phase dense tableau simplex with Bland's rule. Deterministic: identical input
/// gives an identical solution vector.
LpSolution solve(const LpProblem& problem, const SolveOptions& options = {});

/// Largest violation over rows and bounds for `values` (0 when feasible).
double max_violation(const LpProblem& problem, const std::vector<double>& values);

/// CPLEX LP text format, readable by glpsol / HiGHS / CBC.
void write_lp_format(const LpProblem& problem, std::ostream& out);

}  // namespace meolb::lp
