#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <random>

#include "ldr/analytics.hpp"
#include "ldr/fixtures.hpp"
#include "ldr/util.hpp"

using namespace ldr;

namespace {

SimulationResult spot_only(std::vector<std::vector<double>> paths) {
  SimulationResult sim;
  sim.n_scenarios = static_cast<int>(paths.size());
  sim.horizon = static_cast<int>(paths[0].size());
  sim.scenario_cost.assign(sim.n_scenarios, 0.0);
  for (const auto& p : paths) sim.spot.insert(sim.spot.end(), p.begin(), p.end());
  return sim;
}

LdrPolicy flat_policy(std::vector<double> theta, int max_lag = 0) {
  LdrPolicy p;
  p.basis = BasisConfig{1, max_lag, false};
  p.stats.n_reservoirs = 1;
  p.stats.horizon = static_cast<int>(theta.size()) / (1 + 1 * (max_lag + 1));
  HydroSystem shape;
  shape.horizon = p.stats.horizon;
  shape.hydros.resize(1);
  p.index = index_set(shape, p.basis);
  p.theta = std::move(theta);
  return p;
}

}  // namespace

TEST_CASE("cost metrics: degenerate and nearest-rank cases") {
  CostMetrics one = cost_metrics({7.0});
  CHECK(one.mean == 7.0);
  CHECK(one.p5 == 7.0);
  CHECK(one.p95 == 7.0);
  CHECK(one.spread == 0.0);

  std::vector<double> costs(100);
  std::iota(costs.begin(), costs.end(), 1.0);  // 1..100
  std::reverse(costs.begin(), costs.end());    // order must not matter
  CostMetrics m = cost_metrics(costs);
  CHECK(m.mean == doctest::Approx(50.5));
  CHECK(m.p5 == 5.0);    // ceil(0.05*100) = rank 5
  CHECK(m.p95 == 95.0);  // ceil(0.95*100) = rank 95
  CHECK(m.spread == 90.0);
}

TEST_CASE("percentiles are sample members with P5 <= P95") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1000.0);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 1 + static_cast<int>(rng() % 57);
    std::vector<double> xs(n);
    for (auto& x : xs) x = u(rng);
    CostMetrics m = cost_metrics(xs);
    CHECK(std::count(xs.begin(), xs.end(), m.p5) > 0);
    CHECK(std::count(xs.begin(), xs.end(), m.p95) > 0);
    CHECK(m.p5 <= m.p95);
    CHECK(m.spread == m.p95 - m.p5);
  }
}

TEST_CASE("sparsity metrics") {
  // indices: per stage 1 intercept + 1 slope; slopes carry the signal
  LdrPolicy theta0 = flat_policy({9.0, 2.0, 9.0, -2.0});
  SUBCASE("self comparison") {
    SparsityMetrics m = sparsity_metrics(theta0, theta0);
    CHECK(m.l1_shrinkage == doctest::Approx(0.0));
    CHECK(m.nonzero_fraction == doctest::Approx(1.0));
  }
  SUBCASE("all non-intercept zeros") {
    LdrPolicy p = flat_policy({9.0, 0.0, 9.0, 0.0});
    SparsityMetrics m = sparsity_metrics(p, theta0);
    CHECK(m.nonzero_fraction == 0.0);
    CHECK(m.l1_shrinkage == doctest::Approx(1.0));
  }
  SUBCASE("half sparse, three-quarters shrunk") {
    // theta0 slopes (2, -2), theta slopes (1, 0)
    LdrPolicy p = flat_policy({9.0, 1.0, 9.0, 0.0});
    SparsityMetrics m = sparsity_metrics(p, theta0);
    CHECK(m.nonzero_fraction == doctest::Approx(0.5));
    CHECK(m.l1_shrinkage == doctest::Approx(0.75));
  }
  SUBCASE("mismatched index sets are rejected") {
    LdrPolicy other = flat_policy({1.0, 1.0});
    CHECK_THROWS_AS(sparsity_metrics(other, theta0), std::invalid_argument);
  }
}

TEST_CASE("nonzero_by_lag groups by lag") {
  // one stage, max_lag 1: indices (k=0), (k=1,l=0), (k=1,l=1)
  LdrPolicy theta0 = flat_policy({5.0, 3.0, 0.0}, 1);
  SparsityMetrics m = sparsity_metrics(theta0, theta0);
  REQUIRE(m.nonzero_by_lag.size() == 2);
  CHECK(m.nonzero_by_lag[0] == doctest::Approx(1.0));
  CHECK(m.nonzero_by_lag[1] == doctest::Approx(0.0));
}

TEST_CASE("spot metrics: constant and hand-computed paths") {
  SimulationResult flat = spot_only({{50.0, 50.0, 50.0}});
  SpotMetrics m = spot_metrics(flat, 1, 3);
  CHECK(m.mean == doctest::Approx(50.0));
  CHECK(m.avg_uncertainty == doctest::Approx(0.0));
  CHECK(m.time_variability == doctest::Approx(0.0));

  // (100, 200, 100): |100/100| + |-100/200| = 1.5, over T_w - 1 = 2 -> 0.75
  SimulationResult path = spot_only({{100.0, 200.0, 100.0}});
  m = spot_metrics(path, 1, 3);
  CHECK(m.time_variability == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(m.mean == doctest::Approx(400.0 / 3));
  CHECK(m.skipped_ratio_terms == 0);
}

TEST_CASE("time variability is scale-invariant") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(10.0, 300.0);
  std::vector<std::vector<double>> paths(5, std::vector<double>(8));
  for (auto& p : paths)
    for (auto& x : p) x = u(rng);
  SimulationResult sim = spot_only(paths);
  SpotMetrics a = spot_metrics(sim, 2, 7);
  for (auto& p : paths)
    for (auto& x : p) x *= 13.7;
  SimulationResult scaled = spot_only(paths);
  SpotMetrics b = spot_metrics(scaled, 2, 7);
  CHECK(a.time_variability == doctest::Approx(b.time_variability).epsilon(1e-12));
  CHECK(b.mean == doctest::Approx(13.7 * a.mean).epsilon(1e-12));
}

TEST_CASE("zero spot denominators are skipped and counted") {
  SimulationResult sim = spot_only({{0.0, 100.0, 150.0}});
  SpotMetrics m = spot_metrics(sim, 1, 3);
  CHECK(m.skipped_ratio_terms == 1);
  CHECK(m.time_variability == doctest::Approx(0.25));  // only |50/100| over T_w-1=2
}

TEST_CASE("window validation") {
  SimulationResult sim = spot_only({{1.0, 2.0}});
  CHECK_THROWS_AS(spot_metrics(sim, 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(spot_metrics(sim, 1, 3), std::invalid_argument);
  CHECK_THROWS_AS(spot_metrics(sim, 2, 1), std::invalid_argument);
}

TEST_CASE("selection breaks ties toward the lowest lambda") {
  std::vector<SweepRow> rows(3);
  rows[0].lambda = 0.0;
  rows[0].z_M = 100.0;
  rows[1].lambda = 1.0;
  rows[1].z_M = 90.0;
  rows[2].lambda = 10.0;
  rows[2].z_M = 90.0;
  CHECK(select_best_row(rows) == 1);

  rows[1].z_M = 120.0;
  rows[2].z_M = 130.0;
  CHECK(select_best_row(rows) == 0);  // baseline best -> lambda 0, gain 0
}

TEST_CASE("default grid covers the case-study optima") {
  auto grid = default_lambda_grid();
  CHECK(grid.front() == 0.0);
  CHECK(std::count(grid.begin(), grid.end(), 1000.0) == 1);
  CHECK(std::count(grid.begin(), grid.end(), 10000.0) == 1);
  CHECK(grid.back() == 1e6);
}

TEST_CASE("micro sweep end to end") {
  CaseFixture fx = load_fixture("micro");
  ScenarioSet in = generate(fx.process, 8, fx.system.horizon, 41);
  ScenarioSet out = generate(fx.process, 24, fx.system.horizon, 42);
  SweepConfig cfg;
  cfg.jobs = 2;
  int callbacks = 0;
  cfg.on_policy = [&](const SweepRow&, const LdrPolicy&, const SimulationResult&) {
    ++callbacks;
  };
  SweepReport rep = sweep(fx.system, in, out, fx.run.basis, {1.0, 100.0}, cfg);
  REQUIRE(rep.rows.size() == 3);  // 0 prepended
  CHECK(rep.rows[0].lambda == 0.0);
  CHECK(callbacks == 3);
  CHECK(std::is_sorted(rep.rows.begin(), rep.rows.end(),
                       [](const SweepRow& a, const SweepRow& b) { return a.lambda < b.lambda; }));
  for (const auto& r : rep.rows) CHECK(rep.row(rep.selected_lambda).z_M <= r.z_M);
  CHECK(rep.gain >= 0.0);
  CHECK(rep.row(0.0).l1_shrinkage == doctest::Approx(0.0));

  namespace fs = std::filesystem;
  std::string dir = (fs::temp_directory_path() / "ldr_sweep_csv").string();
  save_sweep_csv(rep, dir + "/sweep.csv");
  save_sweep_json(rep, dir + "/sweep.json");
  std::string csv = read_file(dir + "/sweep.csv");
  CHECK(csv.rfind("lambda,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  fs::remove_all(dir);
}
