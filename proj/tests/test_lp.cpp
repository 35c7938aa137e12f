#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "ldr/lp.hpp"

using namespace ldr;

namespace {

// Dual objective b'y + sum_j (d_j > 0 ? l_j d_j : u_j d_j) with d = c - A'y.
// Strong duality holds at optimum for bounded feasible LPs.
double dual_objective(const LpModel& m, const LpSolution& sol) {
  double obj = 0.0;
  for (int i = 0; i < m.n_rows(); ++i) obj += m.rhs(i) * sol.y[i];
  std::vector<double> d(m.n_vars());
  for (int j = 0; j < m.n_vars(); ++j) d[j] = m.objective_coeff(j);
  for (int i = 0; i < m.n_rows(); ++i)
    for (int p = m.row_begin(i); p < m.row_end(i); ++p)
      d[m.entry_col(p)] -= sol.y[i] * m.entry_val(p);
  for (int j = 0; j < m.n_vars(); ++j) {
    if (d[j] > 0)
      obj += m.lower(j) * d[j];
    else
      obj += m.upper(j) * d[j];
  }
  return obj;
}

LpModel random_feasible_lp(std::mt19937_64& rng, int m, int n) {
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  LpModel lp;
  std::vector<double> x0(n);
  for (int j = 0; j < n; ++j) {
    double lo = -5.0 * unit(rng);
    double hi = lo + 1.0 + 8.0 * unit(rng);
    x0[j] = lo + (hi - lo) * unit(rng);
    lp.add_variable("x" + std::to_string(j), lo, hi, coef(rng));
  }
  for (int i = 0; i < m; ++i) {
    std::vector<std::pair<int, double>> terms;
    double act = 0.0;
    for (int j = 0; j < n; ++j) {
      if (unit(rng) < 0.4) continue;
      double a = coef(rng);
      terms.push_back({j, a});
      act += a * x0[j];
    }
    if (terms.empty()) {
      terms.push_back({0, 1.0});
      act = x0[0];
    }
    double pick = unit(rng);
    if (pick < 0.34)
      lp.add_constraint("c" + std::to_string(i), terms, RowSense::Equal, act);
    else if (pick < 0.67)
      lp.add_constraint("c" + std::to_string(i), terms, RowSense::LessEqual,
                        act + 2.0 * unit(rng));
    else
      lp.add_constraint("c" + std::to_string(i), terms, RowSense::GreaterEqual,
                        act - 2.0 * unit(rng));
  }
  return lp;
}

}  // namespace

TEST_CASE("one-variable LP: objective and dual") {
  LpModel lp;
  int x = lp.add_variable("x", -kInf, kInf, 1.0);
  lp.add_constraint("floor", {{x, 1.0}}, RowSense::GreaterEqual, 3.0);
  for (auto backend : {LpBackend::Simplex, LpBackend::InteriorPoint}) {
    LpSolution sol = solve(lp, backend);
    CAPTURE(static_cast<int>(backend));
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(sol.value(lp, "x") == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(sol.dual(lp, "floor") == doctest::Approx(1.0).epsilon(1e-7));
  }
}

TEST_CASE("contradictory constraints report infeasible") {
  LpModel lp;
  int x = lp.add_variable("x", -kInf, kInf, 1.0);
  lp.add_constraint("floor", {{x, 1.0}}, RowSense::GreaterEqual, 3.0);
  lp.add_constraint("cap", {{x, 1.0}}, RowSense::LessEqual, 1.0);
  LpSolution sol = solve_simplex(lp);
  CHECK(sol.status == LpStatus::Infeasible);
  CHECK(sol.message.find("floor") != std::string::npos);
}

TEST_CASE("two-thermal dispatch: marginal unit sets the dual") {
  // costs from the cheap/marginal pair (58, 86): g5 at its 50 MW cap, g6 covers
  // the remaining 10 MW, so the balance dual is 86.
  LpModel lp;
  int g5 = lp.add_variable("g5", 0.0, 50.0, 58.0);
  int g6 = lp.add_variable("g6", 0.0, 50.0, 86.0);
  lp.add_constraint("balance", {{g5, 1.0}, {g6, 1.0}}, RowSense::Equal, 60.0);
  for (auto backend : {LpBackend::Simplex, LpBackend::InteriorPoint}) {
    LpSolution sol = solve(lp, backend);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.value(lp, "g5") == doctest::Approx(50.0).epsilon(1e-7));
    CHECK(sol.value(lp, "g6") == doctest::Approx(10.0).epsilon(1e-7));
    CHECK(sol.dual(lp, "balance") == doctest::Approx(86.0).epsilon(1e-7));
    CHECK(sol.objective == doctest::Approx(58.0 * 50 + 86.0 * 10).epsilon(1e-8));
  }
  // the simplex answer is exact
  LpSolution sol = solve_simplex(lp);
  CHECK(sol.dual(lp, "balance") == 86.0);
}

TEST_CASE("unbounded below is detected") {
  LpModel lp;
  int x = lp.add_variable("x", 0.0, kInf, -1.0);
  lp.add_constraint("c", {{x, -1.0}}, RowSense::LessEqual, 0.0);
  LpSolution sol = solve_simplex(lp);
  CHECK(sol.status == LpStatus::Unbounded);
}

TEST_CASE("dual sign conventions at binding rows") {
  LpModel lp;
  int x = lp.add_variable("x", 0.0, 10.0, -1.0);  // maximize x
  lp.add_constraint("cap", {{x, 1.0}}, RowSense::LessEqual, 4.0);
  for (auto backend : {LpBackend::Simplex, LpBackend::InteriorPoint}) {
    LpSolution sol = solve(lp, backend);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.value(lp, "x") == doctest::Approx(4.0).epsilon(1e-8));
    CHECK(sol.dual(lp, "cap") == doctest::Approx(-1.0).epsilon(1e-7));  // <= row: dual <= 0
  }
}

TEST_CASE("deterministic construction: identical models print identically") {
  auto build = [] {
    LpModel lp;
    int a = lp.add_variable("a", 0.0, 2.0, 1.5);
    int b = lp.add_variable("b", -1.0, kInf, -0.25);
    lp.add_constraint("r1", {{b, 2.0}, {a, 1.0}}, RowSense::LessEqual, 3.0);
    lp.add_constraint("r2", {{a, -1.0}, {b, 1.0}}, RowSense::Equal, 0.5);
    return lp.to_lp_format();
  };
  CHECK(build() == build());
  std::string text = build();
  CHECK(text.find("Minimize") != std::string::npos);
  CHECK(text.find("Subject To") != std::string::npos);
  CHECK(text.find("Bounds") != std::string::npos);
  CHECK(text.rfind("End\n") == text.size() - 4);
}

TEST_CASE("duplicate names are rejected") {
  LpModel lp;
  lp.add_variable("x", 0, 1, 0);
  CHECK_THROWS(lp.add_variable("x", 0, 1, 0));
  lp.add_constraint("c", {{0, 1.0}}, RowSense::Equal, 0.5);
  CHECK_THROWS(lp.add_constraint("c", {{0, 2.0}}, RowSense::Equal, 0.5));
}

TEST_CASE("simplex and interior point agree on random LPs, strong duality holds") {
  std::mt19937_64 rng(20240803);
  int solved = 0;
  for (int trial = 0; trial < 120; ++trial) {
    int m = 3 + static_cast<int>(rng() % 18);
    int n = m + static_cast<int>(rng() % 12);
    LpModel lp = random_feasible_lp(rng, m, n);
    LpSolution a = solve_simplex(lp);
    REQUIRE(a.status == LpStatus::Optimal);
    LpSolution b = solve_interior_point(lp);
    REQUIRE(b.status == LpStatus::Optimal);
    double scale = 1.0 + std::abs(a.objective);
    CHECK(std::abs(a.objective - b.objective) / scale < 1e-6);
    CHECK(primal_residual(lp, a.x) < 1e-6);
    CHECK(primal_residual(lp, b.x) < 1e-6);
    // strong duality both ways
    CHECK(std::abs(dual_objective(lp, a) - a.objective) / scale < 1e-5);
    CHECK(std::abs(dual_objective(lp, b) - b.objective) / scale < 1e-5);
    ++solved;
  }
  CHECK(solved == 120);
}

TEST_CASE("interior point handles free variables") {
  // min |x - 5|-style epigraph with free x
  LpModel lp;
  int x = lp.add_variable("x", -kInf, kInf, 0.0);
  int t = lp.add_variable("t", 0.0, kInf, 1.0);
  lp.add_constraint("ep1", {{t, 1.0}, {x, -1.0}}, RowSense::GreaterEqual, -5.0);
  lp.add_constraint("ep2", {{t, 1.0}, {x, 1.0}}, RowSense::GreaterEqual, 5.0);
  LpSolution sol = solve_interior_point(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(sol.value(lp, "x") == doctest::Approx(5.0).epsilon(1e-5));
}

TEST_CASE("larger structured LP solves with both backends") {
  // chain of balances, transportation-like
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  LpModel lp;
  const int T = 80;
  std::vector<int> v(T), u(T);
  for (int t = 0; t < T; ++t) {
    v[t] = lp.add_variable("v" + std::to_string(t), 0.0, 100.0, 0.0);
    u[t] = lp.add_variable("u" + std::to_string(t), 0.0, 30.0, 1.0 + unit(rng));
  }
  for (int t = 0; t < T; ++t) {
    std::vector<std::pair<int, double>> terms{{v[t], 1.0}, {u[t], 1.0}};
    if (t > 0) terms.push_back({v[t - 1], -1.0});
    double inflow = 5.0 + 20.0 * unit(rng);
    lp.add_constraint("bal" + std::to_string(t), terms, RowSense::Equal,
                      inflow + (t == 0 ? 50.0 : 0.0));
    lp.add_constraint("dem" + std::to_string(t), {{u[t], 1.0}}, RowSense::GreaterEqual, 4.0);
  }
  LpSolution a = solve_simplex(lp);
  LpSolution b = solve_interior_point(lp);
  REQUIRE(a.status == LpStatus::Optimal);
  REQUIRE(b.status == LpStatus::Optimal);
  CHECK(std::abs(a.objective - b.objective) / (1.0 + std::abs(a.objective)) < 1e-7);
}
