#include "meolb/simplex.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>
#include <tuple>

namespace meolb::lp {

std::string VariableTag::label(int column) const {
  switch (kind) {
    case VariableKind::kEpigraph:
      return "t";
    case VariableKind::kRate:
      return fmt::format("R_{}", source);
    case VariableKind::kDirectFraction:
      return fmt::format("wd_{}_{}", source, station);
    case VariableKind::kRelayIslFraction:
      return fmt::format("v_{}_{}_{}", source, via, station);
    case VariableKind::kRelayFlFraction:
      return fmt::format("w_{}_{}_{}", source, via, station);
    case VariableKind::kRelayThroughput:
      return fmt::format("r_{}_{}_{}", source, via, station);
    case VariableKind::kGeneric:
      break;
  }
  return fmt::format("x{}", column);
}

int LpProblem::add_variable(VariableTag tag, double lo, double hi, double objective_coefficient) {
  objective.push_back(objective_coefficient);
  lower.push_back(lo);
  upper.push_back(hi);
  tags.push_back(tag);
  return static_cast<int>(objective.size()) - 1;
}

int LpProblem::add_row(std::vector<LinearTerm> terms, RowSense sense, double rhs_value, std::string name) {
  rows.push_back(std::move(terms));
  senses.push_back(sense);
  rhs.push_back(rhs_value);
  row_names.push_back(std::move(name));
  return static_cast<int>(rows.size()) - 1;
}

void LpProblem::validate() const {
  const std::size_t n = objective.size();
  if (lower.size() != n || upper.size() != n || tags.size() != n) {
    throw std::invalid_argument("LP column arrays have inconsistent sizes");
  }
  if (senses.size() != rows.size() || rhs.size() != rows.size()) {
    throw std::invalid_argument("LP row arrays have inconsistent sizes");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j]) {
      throw std::invalid_argument(fmt::format("column {}: invalid bounds [{}, {}]", j, lower[j], upper[j]));
    }
    if (!std::isfinite(objective[j])) throw std::invalid_argument(fmt::format("column {}: non-finite cost", j));
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!std::isfinite(rhs[r])) throw std::invalid_argument(fmt::format("row {}: non-finite rhs", r));
    for (const auto& term : rows[r]) {
      if (term.column < 0 || static_cast<std::size_t>(term.column) >= n) {
        throw std::invalid_argument(fmt::format("row {}: column index {} out of range", r, term.column));
      }
      if (!std::isfinite(term.coefficient)) {
        throw std::invalid_argument(fmt::format("row {}: non-finite coefficient", r));
      }
    }
  }
  std::set<std::tuple<int, int, int, int>> seen;
  for (const auto& tag : tags) {
    if (tag.kind == VariableKind::kGeneric) continue;
    if (!seen.emplace(static_cast<int>(tag.kind), tag.source, tag.via, tag.station).second) {
      throw std::invalid_argument("duplicate variable tag " + tag.label(-1));
    }
  }
}

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

LpIterationLimit::LpIterationLimit(std::int64_t limit, std::int64_t rows, std::int64_t cols)
    : std::runtime_error(fmt::format("simplex exceeded {} iterations (tableau {} rows x {} cols)", limit,
                                     rows, cols)),
      limit_(limit) {}

namespace {

// x_original = offset + sign * x[pos] - x[neg]   (neg only for free columns)
struct ColumnMap {
  int pos = -1;
  int neg = -1;
  double offset = 0.0;
  double sign = 1.0;
};

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : m_(rows), n_(cols), width_(cols + 1), data_((rows + 1) * (cols + 1), 0.0), basis_(rows, -1),
        allowed_(cols, 1) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * width_ + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * width_ + c]; }
  double& rhs(std::size_t r) { return at(r, n_); }
  double& cost(std::size_t c) { return at(m_, c); }

  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  std::vector<int>& basis() { return basis_; }
  std::vector<char>& allowed() { return allowed_; }

  void pivot(std::size_t r, std::size_t c) {
    double* prow = &data_[r * width_];
    const double inv = 1.0 / prow[c];
    for (std::size_t j = 0; j < width_; ++j) prow[j] *= inv;
    prow[c] = 1.0;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      double* row = &data_[i * width_];
      const double f = row[c];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) row[j] -= f * prow[j];
      row[c] = 0.0;
    }
    basis_[r] = static_cast<int>(c);
  }

  /// Sets the cost row to `costs` and prices out the current basis.
  void load_costs(const std::vector<double>& costs) {
    for (std::size_t j = 0; j <= n_; ++j) cost(j) = j < n_ ? costs[j] : 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = costs[static_cast<std::size_t>(basis_[i])];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= n_; ++j) at(m_, j) -= cb * at(i, j);
    }
  }

  void drop_row(std::size_t r) {
    data_.erase(data_.begin() + static_cast<std::ptrdiff_t>(r * width_),
                data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * width_));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    --m_;
  }

 private:
  std::size_t m_;
  std::size_t n_;
  std::size_t width_;
  std::vector<double> data_;
  std::vector<int> basis_;
  std::vector<char> allowed_;
};

enum class PhaseResult { kOptimal, kUnbounded };

// Minimises the loaded cost row using Bland's rule.
PhaseResult run_phase(Tableau& t, const SolveOptions& options, std::int64_t limit, std::int64_t& iterations) {
  const double tol = options.pivot_tolerance;
  for (;;) {
    std::size_t entering = t.cols();
    for (std::size_t j = 0; j < t.cols(); ++j) {
      if (t.allowed()[j] && t.cost(j) < -tol) {
        entering = j;
        break;
      }
    }
    if (entering == t.cols()) return PhaseResult::kOptimal;

    std::size_t leaving = t.rows();
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < t.rows(); ++i) {
      const double a = t.at(i, entering);
      if (a <= tol) continue;
      const double ratio = std::max(0.0, t.rhs(i)) / a;
      if (leaving == t.rows()) {
        leaving = i;
        best_ratio = ratio;
        continue;
      }
      const double eps = 1e-12 * std::max(1.0, best_ratio);
      if (ratio < best_ratio - eps ||
          (std::abs(ratio - best_ratio) <= eps && t.basis()[i] < t.basis()[leaving])) {
        leaving = i;
        best_ratio = std::min(best_ratio, ratio);
      }
    }
    if (leaving == t.rows()) return PhaseResult::kUnbounded;

    if (++iterations > limit) {
      throw LpIterationLimit(limit, static_cast<std::int64_t>(t.rows()), static_cast<std::int64_t>(t.cols()));
    }
    t.pivot(leaving, entering);
    for (std::size_t i = 0; i < t.rows(); ++i) {
      if (t.rhs(i) < 0.0 && t.rhs(i) > -options.feasibility_tolerance) t.rhs(i) = 0.0;
    }
  }
}

}  // namespace

LpSolution solve(const LpProblem& problem, const SolveOptions& options) {
  problem.validate();
  const std::size_t n_orig = problem.variable_count();

  // Standard form: shift/reflect/split columns so that every structural column is >= 0.
  std::vector<ColumnMap> maps(n_orig);
  int n_struct = 0;
  struct BoundRow {
    int column;
    double limit;
  };
  std::vector<BoundRow> bound_rows;
  for (std::size_t j = 0; j < n_orig; ++j) {
    const double lo = problem.lower[j];
    const double hi = problem.upper[j];
    ColumnMap& cm = maps[j];
    cm.pos = n_struct++;
    if (std::isfinite(lo)) {
      cm.offset = lo;
      if (std::isfinite(hi)) bound_rows.push_back({cm.pos, hi - lo});
    } else if (std::isfinite(hi)) {
      cm.offset = hi;
      cm.sign = -1.0;
    } else {
      cm.neg = n_struct++;
    }
  }

  struct StdRow {
    std::vector<double> coeffs;
    RowSense sense;
    double rhs;
  };
  std::vector<StdRow> std_rows;
  std_rows.reserve(problem.row_count() + bound_rows.size());
  for (std::size_t r = 0; r < problem.row_count(); ++r) {
    StdRow row{std::vector<double>(static_cast<std::size_t>(n_struct), 0.0), problem.senses[r], problem.rhs[r]};
    for (const auto& term : problem.rows[r]) {
      const ColumnMap& cm = maps[static_cast<std::size_t>(term.column)];
      row.coeffs[static_cast<std::size_t>(cm.pos)] += term.coefficient * cm.sign;
      if (cm.neg >= 0) row.coeffs[static_cast<std::size_t>(cm.neg)] -= term.coefficient;
      row.rhs -= term.coefficient * cm.offset;
    }
    std_rows.push_back(std::move(row));
  }
  for (const auto& b : bound_rows) {
    StdRow row{std::vector<double>(static_cast<std::size_t>(n_struct), 0.0), RowSense::kLessEqual, b.limit};
    row.coeffs[static_cast<std::size_t>(b.column)] = 1.0;
    std_rows.push_back(std::move(row));
  }

  std::size_t n_slack = 0;
  std::size_t n_art = 0;
  for (auto& row : std_rows) {
    if (row.rhs < 0.0) {
      for (double& c : row.coeffs) c = -c;
      row.rhs = -row.rhs;
      if (row.sense == RowSense::kLessEqual) {
        row.sense = RowSense::kGreaterEqual;
      } else if (row.sense == RowSense::kGreaterEqual) {
        row.sense = RowSense::kLessEqual;
      }
    }
    if (row.sense != RowSense::kEqual) ++n_slack;
    if (row.sense != RowSense::kLessEqual) ++n_art;
  }

  const std::size_t m = std_rows.size();
  const std::size_t ns = static_cast<std::size_t>(n_struct);
  const std::size_t n_total = ns + n_slack + n_art;
  Tableau t(m, n_total);
  std::vector<char> artificial(n_total, 0);
  {
    std::size_t next_slack = ns;
    std::size_t next_art = ns + n_slack;
    for (std::size_t i = 0; i < m; ++i) {
      const StdRow& row = std_rows[i];
      for (std::size_t j = 0; j < ns; ++j) t.at(i, j) = row.coeffs[j];
      t.rhs(i) = row.rhs;
      if (row.sense == RowSense::kLessEqual) {
        t.at(i, next_slack) = 1.0;
        t.basis()[i] = static_cast<int>(next_slack++);
      } else {
        if (row.sense == RowSense::kGreaterEqual) t.at(i, next_slack++) = -1.0;
        t.at(i, next_art) = 1.0;
        artificial[next_art] = 1;
        t.basis()[i] = static_cast<int>(next_art++);
      }
    }
  }

  const std::int64_t limit =
      options.max_iterations.value_or(10 * static_cast<std::int64_t>(m + n_total));
  LpSolution solution;
  solution.values.assign(n_orig, 0.0);

  double rhs_scale = 1.0;
  for (const auto& row : std_rows) rhs_scale = std::max(rhs_scale, std::abs(row.rhs));

  if (n_art > 0) {
    std::vector<double> phase1(n_total, 0.0);
    for (std::size_t j = 0; j < n_total; ++j) phase1[j] = artificial[j] ? 1.0 : 0.0;
    t.load_costs(phase1);
    run_phase(t, options, limit, solution.iteration_count);
    const double infeasibility = -t.cost(n_total);
    if (infeasibility > options.feasibility_tolerance * rhs_scale) {
      solution.status = LpStatus::kInfeasible;
      return solution;
    }
    // Drive remaining (zero-valued) artificials out of the basis; drop redundant rows.
    for (std::size_t i = 0; i < t.rows();) {
      if (!artificial[static_cast<std::size_t>(t.basis()[i])]) {
        ++i;
        continue;
      }
      std::size_t col = n_total;
      for (std::size_t j = 0; j < n_total; ++j) {
        if (!artificial[j] && std::abs(t.at(i, j)) > options.pivot_tolerance) {
          col = j;
          break;
        }
      }
      if (col == n_total) {
        t.drop_row(i);
      } else {
        t.pivot(i, col);
        ++i;
      }
    }
    for (std::size_t j = 0; j < n_total; ++j) {
      if (artificial[j]) t.allowed()[j] = 0;
    }
  }

  std::vector<double> phase2(n_total, 0.0);
  for (std::size_t j = 0; j < n_orig; ++j) {
    const ColumnMap& cm = maps[j];
    const double c = problem.objective[j];
    phase2[static_cast<std::size_t>(cm.pos)] = -c * cm.sign;
    if (cm.neg >= 0) phase2[static_cast<std::size_t>(cm.neg)] = c;
  }
  t.load_costs(phase2);
  if (run_phase(t, options, limit, solution.iteration_count) == PhaseResult::kUnbounded) {
    solution.status = LpStatus::kUnbounded;
    return solution;
  }

  std::vector<double> x(n_total, 0.0);
  for (std::size_t i = 0; i < t.rows(); ++i) x[static_cast<std::size_t>(t.basis()[i])] = t.rhs(i);
  for (std::size_t j = 0; j < n_orig; ++j) {
    const ColumnMap& cm = maps[j];
    double v = cm.offset + cm.sign * x[static_cast<std::size_t>(cm.pos)];
    if (cm.neg >= 0) v -= x[static_cast<std::size_t>(cm.neg)];
    solution.values[j] = std::clamp(v, problem.lower[j], problem.upper[j]);
  }
  solution.status = LpStatus::kOptimal;
  solution.objective_value = 0.0;
  for (std::size_t j = 0; j < n_orig; ++j) solution.objective_value += problem.objective[j] * solution.values[j];
  return solution;
}

double max_violation(const LpProblem& problem, const std::vector<double>& values) {
  double worst = 0.0;
  for (std::size_t r = 0; r < problem.row_count(); ++r) {
    double activity = 0.0;
    for (const auto& term : problem.rows[r]) activity += term.coefficient * values[static_cast<std::size_t>(term.column)];
    const double diff = activity - problem.rhs[r];
    switch (problem.senses[r]) {
      case RowSense::kLessEqual:
        worst = std::max(worst, diff);
        break;
      case RowSense::kGreaterEqual:
        worst = std::max(worst, -diff);
        break;
      case RowSense::kEqual:
        worst = std::max(worst, std::abs(diff));
        break;
    }
  }
  for (std::size_t j = 0; j < problem.variable_count(); ++j) {
    worst = std::max(worst, problem.lower[j] - values[j]);
    worst = std::max(worst, values[j] - problem.upper[j]);
  }
  return worst;
}

namespace {

std::string format_coeff(double c) { return fmt::format("{:.17g}", c); }

void write_terms(std::ostream& out, const LpProblem& problem, const std::vector<LinearTerm>& terms) {
  bool first = true;
  for (const auto& term : terms) {
    if (term.coefficient == 0.0) continue;
    const std::string name = problem.tags[static_cast<std::size_t>(term.column)].label(term.column);
    if (first) {
      out << (term.coefficient < 0 ? "- " : "") << format_coeff(std::abs(term.coefficient)) << ' ' << name;
    } else {
      out << (term.coefficient < 0 ? " - " : " + ") << format_coeff(std::abs(term.coefficient)) << ' ' << name;
    }
    first = false;
  }
  if (first) out << "0 " << problem.tags.front().label(0);
}

}  // namespace

void write_lp_format(const LpProblem& problem, std::ostream& out) {
  out << "\\ max-min anycast multi-commodity flow slot problem\n";
  out << "Maximize\n obj: ";
  std::vector<LinearTerm> obj;
  for (std::size_t j = 0; j < problem.variable_count(); ++j) {
    if (problem.objective[j] != 0.0) obj.push_back({static_cast<int>(j), problem.objective[j]});
  }
  write_terms(out, problem, obj);
  out << "\nSubject To\n";
  for (std::size_t r = 0; r < problem.row_count(); ++r) {
    const std::string name = problem.row_names[r].empty() ? fmt::format("c{}", r) : problem.row_names[r];
    out << ' ' << name << ": ";
    write_terms(out, problem, problem.rows[r]);
    const char* op = problem.senses[r] == RowSense::kLessEqual  ? " <= "
                     : problem.senses[r] == RowSense::kEqual ? " = "
                                                             : " >= ";
    out << op << format_coeff(problem.rhs[r]) << '\n';
  }
  out << "Bounds\n";
  for (std::size_t j = 0; j < problem.variable_count(); ++j) {
    const std::string name = problem.tags[j].label(static_cast<int>(j));
    const double lo = problem.lower[j];
    const double hi = problem.upper[j];
    if (!std::isfinite(lo) && !std::isfinite(hi)) {
      out << ' ' << name << " free\n";
    } else if (!std::isfinite(hi)) {
      out << ' ' << name << " >= " << format_coeff(lo) << '\n';
    } else if (!std::isfinite(lo)) {
      out << " -inf <= " << name << " <= " << format_coeff(hi) << '\n';
    } else {
      out << ' ' << format_coeff(lo) << " <= " << name << " <= " << format_coeff(hi) << '\n';
    }
  }
  out << "End\n";
}

}  // namespace meolb::lp
