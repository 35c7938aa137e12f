#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "ldr/errors.hpp"
#include "ldr/fixtures.hpp"
#include "ldr/stt.hpp"
#include "ldr/util.hpp"
#include "support/oracles.hpp"

using namespace ldr;

namespace {

// Intercept-only policy with a fixed storage target per stage.
LdrPolicy constant_target_policy(const HydroSystem& sys, const ScenarioSet& scen,
                                 double target) {
  LdrPolicy p;
  p.basis = BasisConfig{0, 0, false};
  p.stats = standardize_stats(scen);
  HydroSystem shape;
  shape.horizon = sys.horizon;
  shape.hydros.resize(sys.n_hydros());
  p.index = index_set(shape, p.basis);
  p.theta.assign(p.index.size(), target);
  return p;
}

struct MicroData {
  HydroSystem sys;
  ScenarioSet scen;
  BasisConfig basis;
};

MicroData micro(int n, uint64_t seed = 11) {
  CaseFixture fx = load_fixture("micro");
  MicroData d;
  d.sys = fx.system;
  d.scen = generate(fx.process, n, d.sys.horizon, seed);
  d.basis = fx.run.basis;
  return d;
}

InflowFn fixed_inflow(const ScenarioSet& scen, int s) {
  return [&scen, s](int t, int h) { return scen.inflow(s, t, h); };
}

}  // namespace

TEST_CASE("reachable target is tracked exactly") {
  MicroData d = micro(2);
  d.scen.at(0, 1, 0) = 30.0;
  LdrPolicy p = constant_target_policy(d.sys, d.scen, 55.0);
  SttConfig cfg;
  StageDecision dec = stt_step(d.sys, p, {60.0}, fixed_inflow(d.scen, 0), 1, cfg);
  // v0 + inflow - u = 55 with u = 35 <= u_max
  CHECK(dec.v[0] == doctest::Approx(55.0).epsilon(1e-9));
  CHECK(dec.e_plus[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(dec.e_minus[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(dec.u[0] == doctest::Approx(35.0).epsilon(1e-9));
  // hydro covers 17.5 MW, the cheap 50 MW unit covers the remaining 42.5
  CHECK(dec.g[0] == doctest::Approx(42.5).epsilon(1e-9));
  CHECK(dec.spot == doctest::Approx(58.0).epsilon(1e-9));
  CHECK(dec.stage_cost == doctest::Approx(42.5 * 58.0).epsilon(1e-9));
}

TEST_CASE("target above v_max: deviation absorbs the gap at minimum cost") {
  // Hand vertex enumeration: gamma = 10*500*0.5 = 2500 per unit of deviation
  // dwarfs the 29 $/unit thermal saving from turbining, so the reservoir holds
  // every drop: v = v0 + inflow = 90, e+ = 60, e- = 0, thermals serve all load.
  MicroData d = micro(2);
  d.scen.at(0, 1, 0) = 30.0;
  LdrPolicy p = constant_target_policy(d.sys, d.scen, 150.0);
  SttConfig cfg;
  StageDecision dec = stt_step(d.sys, p, {60.0}, fixed_inflow(d.scen, 0), 1, cfg);
  CHECK(dec.v[0] == doctest::Approx(90.0).epsilon(1e-9));
  CHECK(dec.e_plus[0] == doctest::Approx(60.0).epsilon(1e-9));
  CHECK(dec.e_minus[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(dec.u[0] == doctest::Approx(0.0).epsilon(1e-9));
  // demand 60 = 50 cheap + 10 dear, so the marginal unit sets spot = 86
  CHECK(dec.g[0] == doctest::Approx(50.0).epsilon(1e-9));
  CHECK(dec.g[1] == doctest::Approx(10.0).epsilon(1e-9));
  CHECK(dec.spot == 86.0);
}

TEST_CASE("zero inflows drain toward v_min at the turbine limit") {
  HydroSystem sys;
  sys.horizon = 4;
  sys.demand = {50.0};
  sys.deficit_cost = 400.0;
  Hydro hy;
  hy.name = "h";
  hy.v_min = 20;
  hy.v_max = 150;
  hy.v0 = 100;
  hy.v_f = 20;
  hy.u_max = 30;
  hy.production_factor = 0.5;
  sys.hydros.push_back(hy);
  Thermal th;
  th.name = "t";
  th.capacity = 60;
  th.variable_cost = 100;
  sys.thermals.push_back(th);

  ScenarioSet scen;
  scen.n_scenarios = 1;
  scen.horizon = 4;
  scen.n_reservoirs = 1;
  scen.inflows.assign(4, 0.0);
  scen.history = {{0.0}};

  LdrPolicy p = constant_target_policy(sys, scen, sys.hydros[0].v_min);
  SttConfig cfg;
  cfg.apply_vf_at_T = false;
  SimulationResult sim = simulate(sys, p, scen, cfg);
  // hand recursion: the target is reachable at once because spill is free, so
  // v drops straight to v_min; the turbine takes its 30-unit share of the
  // 80-unit release and the remaining 50 spill. After that the reservoir is
  // dry at v_min with u = s = 0.
  const double expect_v[4] = {20, 20, 20, 20};
  const double expect_u[4] = {30, 0, 0, 0};
  const double expect_s[4] = {50, 0, 0, 0};
  for (int t = 1; t <= 4; ++t) {
    CHECK(sim.decision(0, t).v[0] == doctest::Approx(expect_v[t - 1]).epsilon(1e-9));
    CHECK(sim.decision(0, t).u[0] == doctest::Approx(expect_u[t - 1]).epsilon(1e-9));
    CHECK(sim.decision(0, t).s[0] == doctest::Approx(expect_s[t - 1]).epsilon(1e-9));
  }
}

TEST_CASE("deterministic closure: z_M equals in-sample cost on one scenario") {
  MicroData d = micro(1, 3);
  LdrPolicy p = estimate(d.sys, d.scen, d.basis, 0.0);
  SttConfig cfg;
  SimulationResult sim = simulate(d.sys, p, d.scen, cfg);
  CHECK(std::abs(sim.z_M - p.in_sample_cost) / (1.0 + std::abs(p.in_sample_cost)) < 1e-5);
  double oracle = testing::deterministic_dispatch_cost(d.sys, d.scen, 0);
  CHECK(std::abs(sim.z_M - oracle) / (1.0 + std::abs(oracle)) < 1e-5);
}

TEST_CASE("z_M is the exact mean and is order-invariant") {
  MicroData d = micro(6, 21);
  LdrPolicy p = estimate(d.sys, d.scen, d.basis, 0.0);
  SttConfig cfg;
  SimulationResult sim = simulate(d.sys, p, d.scen, cfg);
  double mean = 0.0;
  for (double c : sim.scenario_cost) mean += c;
  mean /= sim.n_scenarios;
  CHECK(sim.z_M == mean);

  // reverse the scenario order
  ScenarioSet rev = d.scen;
  for (int s = 0; s < d.scen.n_scenarios; ++s)
    for (int t = 1; t <= d.scen.horizon; ++t)
      for (int h = 0; h < d.scen.n_reservoirs; ++h)
        rev.at(s, t, h) = d.scen.inflow(d.scen.n_scenarios - 1 - s, t, h);
  SimulationResult sim2 = simulate(d.sys, p, rev, cfg);
  CHECK(sim2.z_M == doctest::Approx(sim.z_M).epsilon(1e-12));
}

TEST_CASE("simulation satisfies balances and deviation complementarity") {
  MicroData d = micro(12, 31);
  LdrPolicy theta0 = estimate(d.sys, d.scen, d.basis, 0.0);
  ScenarioSet out = generate(load_fixture("micro").process, 20, d.sys.horizon, 999);
  SttConfig cfg;
  cfg.jobs = 2;
  SimulationResult sim = simulate(d.sys, theta0, out, cfg);
  CHECK(sim.max_water_residual < 1e-6);
  CHECK(sim.max_energy_residual < 1e-6);
  CHECK(sim.max_deviation_overlap < 1e-6);
  CHECK(sim.n_scenarios == 20);
}

TEST_CASE("nonanticipativity: agreement through t gives identical decisions through t") {
  MicroData d = micro(2, 17);
  // make the two scenarios agree at stage 1 and differ at stage 2
  d.scen.at(1, 1, 0) = d.scen.at(0, 1, 0);
  d.scen.at(1, 2, 0) = d.scen.at(0, 2, 0) + 10.0;
  LdrPolicy p = estimate(d.sys, d.scen, d.basis, 0.0);
  SttConfig cfg;
  SimulationResult sim = simulate(d.sys, p, d.scen, cfg);
  const StageDecision& a = sim.decision(0, 1);
  const StageDecision& b = sim.decision(1, 1);
  for (size_t i = 0; i < a.g.size(); ++i) CHECK(std::abs(a.g[i] - b.g[i]) <= 1e-8);
  CHECK(std::abs(a.v[0] - b.v[0]) <= 1e-8);
  CHECK(std::abs(a.u[0] - b.u[0]) <= 1e-8);
  CHECK(std::abs(a.spot - b.spot) <= 1e-8);
  // and they genuinely diverge afterwards (extra stage-2 water shifts u or g)
  bool diverged = std::abs(sim.decision(0, 2).u[0] - sim.decision(1, 2).u[0]) > 1e-9 ||
                  std::abs(sim.decision(0, 2).s[0] - sim.decision(1, 2).s[0]) > 1e-9 ||
                  std::abs(sim.decision(0, 2).g[0] - sim.decision(1, 2).g[0]) > 1e-9;
  CHECK(diverged);
}

TEST_CASE("gamma floor is enforced") {
  MicroData d = micro(1);
  SttConfig cfg;
  cfg.gamma = 100.0;  // below deficit_cost * rho = 250
  LdrPolicy p = constant_target_policy(d.sys, d.scen, 50.0);
  CHECK_THROWS_AS(simulate(d.sys, p, d.scen, cfg), ConfigError);
  cfg.gamma = 0.0;  // default rule: 10x the floor
  CHECK(effective_gamma(d.sys, cfg) == doctest::Approx(2500.0));
}

TEST_CASE("vf bound applies only at the last stage when configured") {
  MicroData d = micro(1, 5);
  d.scen.at(0, 1, 0) = 10.0;
  d.scen.at(0, 2, 0) = 10.0;
  LdrPolicy p = constant_target_policy(d.sys, d.scen, 40.0);
  SttConfig cfg;  // apply_vf_at_T on by default, v_f = 50
  SimulationResult sim = simulate(d.sys, p, d.scen, cfg);
  CHECK(sim.decision(0, 1).v[0] == doctest::Approx(40.0).epsilon(1e-8));  // free to track
  CHECK(sim.decision(0, 2).v[0] >= 50.0 - 1e-9);   // pinned by v_f above the target
  CHECK(sim.decision(0, 2).e_minus[0] == doctest::Approx(10.0).epsilon(1e-8));

  cfg.apply_vf_at_T = false;
  SimulationResult sim2 = simulate(d.sys, p, d.scen, cfg);
  CHECK(sim2.decision(0, 2).v[0] == doctest::Approx(40.0).epsilon(1e-8));
}

TEST_CASE("simulation export files") {
  MicroData d = micro(3, 8);
  LdrPolicy p = estimate(d.sys, d.scen, d.basis, 0.0);
  SttConfig cfg;
  SimulationResult sim = simulate(d.sys, p, d.scen, cfg);
  namespace fs = std::filesystem;
  std::string dir = (fs::temp_directory_path() / "ldr_stt_csv").string();
  save_simulation_csv(sim, dir + "/long.csv");
  save_cost_summary_csv(sim, dir + "/costs.csv");
  std::string longs = read_file(dir + "/long.csv");
  CHECK(longs.rfind("scenario,stage,variable,value\n", 0) == 0);
  CHECK(longs.find(",spot,") != std::string::npos);
  std::string costs = read_file(dir + "/costs.csv");
  CHECK(costs.rfind("scenario,cost\n", 0) == 0);
  CHECK(std::count(costs.begin(), costs.end(), '\n') == 4);  // header + 3 rows
  fs::remove_all(dir);
}
