#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "meolb/simplex.hpp"
#include "support/vertex_enum.hpp"

using namespace meolb::lp;

namespace {

LpProblem from_dense(const oracle::DenseLp& d) {
  LpProblem p;
  for (double c : d.c) p.add_variable({}, 0.0, kInfinity, c);
  for (std::size_t i = 0; i < d.b.size(); ++i) {
    std::vector<LinearTerm> terms;
    for (std::size_t j = 0; j < d.c.size(); ++j) {
      if (d.a[i][j] != 0.0) terms.push_back({static_cast<int>(j), d.a[i][j]});
    }
    p.add_row(std::move(terms), RowSense::kLessEqual, d.b[i]);
  }
  return p;
}

/// Random 8-variable / 6-row instance. Row 0 bounds the sum, so the polytope is compact;
/// some rows get negative right-hand sides, which exercises phase 1 and infeasibility.
oracle::DenseLp random_dense(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-1.0, 2.0);
  std::uniform_real_distribution<double> rhs(-2.0, 10.0);
  std::uniform_int_distribution<int> zero(0, 3);
  oracle::DenseLp d;
  d.c.resize(8);
  for (double& c : d.c) c = coef(rng);
  d.a.assign(6, std::vector<double>(8, 0.0));
  d.b.resize(6);
  for (std::size_t j = 0; j < 8; ++j) d.a[0][j] = 1.0;
  d.b[0] = 20.0;
  for (std::size_t i = 1; i < 6; ++i) {
    for (std::size_t j = 0; j < 8; ++j) d.a[i][j] = zero(rng) == 0 ? 0.0 : coef(rng);
    d.b[i] = rhs(rng);
  }
  return d;
}

}  // namespace

TEST_CASE("epigraph of a minimum") {
  LpProblem p;
  const int t = p.add_variable({VariableKind::kEpigraph}, 0.0, kInfinity, 1.0);
  p.add_row({{t, 1.0}}, RowSense::kLessEqual, 3.0);
  p.add_row({{t, 1.0}}, RowSense::kLessEqual, 5.0);
  const auto s = solve(p);
  REQUIRE(s.status == LpStatus::kOptimal);
  CHECK(s.objective_value == doctest::Approx(3.0));
  CHECK(s.values[0] == doctest::Approx(3.0));
}

TEST_CASE("redundant equalities and degenerate vertices terminate") {
  LpProblem p;
  const int x = p.add_variable({}, 0.0, kInfinity, 1.0);
  const int y = p.add_variable({}, 0.0, kInfinity, 1.0);
  const int z = p.add_variable({}, 0.0, kInfinity, 0.0);
  p.add_row({{x, 1.0}, {y, 1.0}}, RowSense::kEqual, 4.0);
  p.add_row({{x, 2.0}, {y, 2.0}}, RowSense::kEqual, 8.0);  // same plane
  p.add_row({{x, 1.0}, {y, 1.0}, {z, 0.0}}, RowSense::kEqual, 4.0);
  p.add_row({{x, 1.0}, {z, -1.0}}, RowSense::kLessEqual, 0.0);
  p.add_row({{y, 1.0}, {z, -1.0}}, RowSense::kLessEqual, 4.0);
  p.add_row({{x, 1.0}}, RowSense::kLessEqual, 0.0);  // degenerate at the optimum
  const auto s = solve(p);
  REQUIRE(s.status == LpStatus::kOptimal);
  CHECK(s.objective_value == doctest::Approx(4.0));
  CHECK(max_violation(p, s.values) <= 1e-8);
}

TEST_CASE("Beale's cycling example is solved") {
  // Cycles under the textbook largest-coefficient rule; Bland's rule must finish.
  LpProblem p;
  const int x4 = p.add_variable({}, 0.0, kInfinity, 0.75);
  const int x5 = p.add_variable({}, 0.0, kInfinity, -150.0);
  const int x6 = p.add_variable({}, 0.0, kInfinity, 0.02);
  const int x7 = p.add_variable({}, 0.0, kInfinity, -6.0);
  p.add_row({{x4, 0.25}, {x5, -60.0}, {x6, -0.04}, {x7, 9.0}}, RowSense::kLessEqual, 0.0);
  p.add_row({{x4, 0.5}, {x5, -90.0}, {x6, -0.02}, {x7, 3.0}}, RowSense::kLessEqual, 0.0);
  p.add_row({{x6, 1.0}}, RowSense::kLessEqual, 1.0);
  const auto s = solve(p);
  REQUIRE(s.status == LpStatus::kOptimal);
  CHECK(s.objective_value == doctest::Approx(0.05));
}

TEST_CASE("infeasible and unbounded problems report status") {
  LpProblem inf;
  const int x = inf.add_variable({}, 0.0, kInfinity, 1.0);
  inf.add_row({{x, 1.0}}, RowSense::kLessEqual, 1.0);
  inf.add_row({{x, 1.0}}, RowSense::kGreaterEqual, 2.0);
  CHECK(solve(inf).status == LpStatus::kInfeasible);

  LpProblem unb;
  const int a = unb.add_variable({}, 0.0, kInfinity, 1.0);
  const int b = unb.add_variable({}, 0.0, kInfinity, 0.0);
  unb.add_row({{a, 1.0}, {b, -1.0}}, RowSense::kLessEqual, 1.0);
  CHECK(solve(unb).status == LpStatus::kUnbounded);
}

TEST_CASE("general bounds") {
  LpProblem p;
  const int free = p.add_variable({}, -kInfinity, kInfinity, -1.0);  // minimise a free column
  const int neg = p.add_variable({}, -5.0, -1.0, 1.0);
  const int up = p.add_variable({}, -kInfinity, 3.0, 1.0);
  p.add_row({{free, 1.0}, {neg, 1.0}}, RowSense::kGreaterEqual, -2.5);
  p.add_row({{up, 1.0}, {free, 1.0}}, RowSense::kLessEqual, 10.0);
  const auto s = solve(p);
  REQUIRE(s.status == LpStatus::kOptimal);
  CHECK(s.values[static_cast<std::size_t>(neg)] == doctest::Approx(-1.0));
  CHECK(s.values[static_cast<std::size_t>(free)] == doctest::Approx(-1.5));
  CHECK(s.values[static_cast<std::size_t>(up)] == doctest::Approx(3.0));
  CHECK(s.objective_value == doctest::Approx(1.5 - 1.0 + 3.0));
}

TEST_CASE("random LPs agree with vertex enumeration") {
  std::mt19937_64 rng(20260101);
  int optimal = 0;
  int infeasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto d = random_dense(rng);
    const auto ref = oracle::enumerate_vertices(d);
    const auto p = from_dense(d);
    const auto s = solve(p);
    if (!ref) {
      CHECK(s.status == LpStatus::kInfeasible);
      ++infeasible;
      continue;
    }
    REQUIRE(s.status == LpStatus::kOptimal);
    CHECK(std::abs(s.objective_value - ref->objective) <= 1e-7 * std::max(1.0, std::abs(ref->objective)));
    CHECK(max_violation(p, s.values) <= 1e-8);
    ++optimal;
  }
  CHECK(optimal > 200);
  MESSAGE("optimal ", optimal, ", infeasible ", infeasible);
}

TEST_CASE("solutions are bit-identical across runs") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = from_dense(random_dense(rng));
    const auto a = solve(p);
    const auto b = solve(p);
    CHECK(a.status == b.status);
    CHECK(a.values == b.values);
    CHECK(a.iteration_count == b.iteration_count);
  }
}

TEST_CASE("iteration cap raises a diagnostic") {
  std::mt19937_64 rng(3);
  LpProblem p;
  for (;;) {
    p = from_dense(random_dense(rng));
    if (solve(p).iteration_count > 2) break;
  }
  SolveOptions o;
  o.max_iterations = 1;
  CHECK_THROWS_AS(solve(p, o), LpIterationLimit);
}

TEST_CASE("problem validation") {
  LpProblem p;
  const int x = p.add_variable({VariableKind::kRate, 0}, 0.0, 1.0);
  p.add_row({{x, 1.0}}, RowSense::kLessEqual, 1.0);
  CHECK_NOTHROW(p.validate());

  LpProblem dup = p;
  dup.add_variable({VariableKind::kRate, 0}, 0.0, 1.0);
  CHECK_THROWS_AS(dup.validate(), std::invalid_argument);

  LpProblem bounds = p;
  bounds.lower[0] = 2.0;
  CHECK_THROWS_AS(bounds.validate(), std::invalid_argument);

  LpProblem rhs = p;
  rhs.rhs[0] = kInfinity;
  CHECK_THROWS_AS(rhs.validate(), std::invalid_argument);

  LpProblem col = p;
  col.rows[0].push_back({5, 1.0});
  CHECK_THROWS_AS(col.validate(), std::invalid_argument);
}

TEST_CASE("LP text export") {
  LpProblem p;
  const int t = p.add_variable({VariableKind::kEpigraph}, 0.0, kInfinity, 1.0);
  const int r = p.add_variable({VariableKind::kRate, 2}, 0.0, kInfinity);
  const int w = p.add_variable({VariableKind::kDirectFraction, 2, 2, 1}, 0.0, 1.0);
  p.add_row({{t, 1.0}, {r, -1.0}}, RowSense::kLessEqual, 0.0, "epi_2");
  p.add_row({{r, 1.0}, {w, -300.0}}, RowSense::kEqual, 0.0, "rate_2");
  std::ostringstream out;
  write_lp_format(p, out);
  const std::string text = out.str();
  CHECK(text.find("Maximize") != std::string::npos);
  CHECK(text.find("epi_2:") != std::string::npos);
  CHECK(text.find("R_2") != std::string::npos);
  CHECK(text.find("wd_2_1") != std::string::npos);
  CHECK(text.find("End") != std::string::npos);
}
