#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "ldr/basis.hpp"

using namespace ldr;

namespace {

HydroSystem shape(int horizon, int n_hydros) {
  HydroSystem sys;
  sys.horizon = horizon;
  sys.hydros.resize(n_hydros);
  return sys;
}

StandardizationStats unit_stats(int horizon, int n_res, int lag_stages) {
  StandardizationStats st;
  st.horizon = horizon;
  st.n_reservoirs = n_res;
  st.lag_stages = lag_stages;
  size_t cells = static_cast<size_t>(horizon + lag_stages) * n_res;
  st.mu.assign(cells, 0.0);
  st.sigma.assign(cells, 1.0);
  if (n_res >= 2) {
    st.mu_c.assign(cells, 0.0);
    st.sigma_c.assign(cells, 1.0);
  }
  return st;
}

}  // namespace

TEST_CASE("minimal basis: intercept plus one slope") {
  BasisConfig cfg{1, 0, false};
  auto idx = index_set(shape(1, 1), cfg);
  REQUIRE(idx.size() == 2);
  CHECK(idx[0] == CoefficientIndex{1, 1, 0, 0, 1});
  CHECK(idx[1] == CoefficientIndex{1, 1, 1, 0, 1});
}

TEST_CASE("coefficient counts match the closed form") {
  // 24 stages, 5 hydros, 12 lag terms (tau = 11), degree 6
  BasisConfig cfg{6, 11, true};
  auto idx = index_set(shape(24, 5), cfg);
  CHECK(idx.size() == 17400);
  int own = 0;
  for (const auto& ci : idx)
    if (ci.r == 1) ++own;
  CHECK(own == 8760);  // intercepts + own-inflow terms: 24*5*(1+72)
  CHECK(idx.size() - own == 8640);

  // case1 shape: 36 stages, single hydro, no complement possible
  BasisConfig c1{6, 11, true};
  auto idx1 = index_set(shape(36, 1), c1);
  CHECK(idx1.size() == 36 * 73);
}

TEST_CASE("index invariants: k = 0 only as (l = 0, r = 1); r = 2 needs k >= 1") {
  BasisConfig cfg{3, 2, true};
  auto idx = index_set(shape(4, 3), cfg);
  for (const auto& ci : idx) {
    if (ci.k == 0) {
      CHECK(ci.l == 0);
      CHECK(ci.r == 1);
    }
    if (ci.r == 2) CHECK(ci.k >= 1);
  }
  // deterministic (t, h, r, k, l) lexicographic order
  for (size_t i = 1; i < idx.size(); ++i) {
    auto a = std::make_tuple(idx[i - 1].t, idx[i - 1].h, idx[i - 1].r, idx[i - 1].k, idx[i - 1].l);
    auto b = std::make_tuple(idx[i].t, idx[i].h, idx[i].r, idx[i].k, idx[i].l);
    CHECK(a < b);
  }
}

TEST_CASE("index count matches the formula for random configs") {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 200; ++trial) {
    int T = 1 + static_cast<int>(rng() % 30);
    int H = 1 + static_cast<int>(rng() % 6);
    BasisConfig cfg;
    cfg.max_degree = static_cast<int>(rng() % 7);
    cfg.max_lag = static_cast<int>(rng() % 13);
    cfg.include_complement = (rng() % 2) == 0;
    bool comp = cfg.include_complement && H >= 2;
    size_t expect = static_cast<size_t>(T) * H *
                    (1 + cfg.max_degree * (cfg.max_lag + 1) * (comp ? 2 : 1));
    CHECK(index_set(shape(T, H), cfg).size() == expect);
  }
}

TEST_CASE("centered inputs give intercept-only features") {
  StandardizationStats st = unit_stats(3, 1, 2);
  for (size_t i = 0; i < st.mu.size(); ++i) st.mu[i] = 42.0;
  BasisConfig cfg{3, 2, false};
  InflowFn inflow = [](int, int) { return 42.0; };
  auto f = features(inflow, st, 3, 0, cfg, 1);
  REQUIRE(f.size() == static_cast<size_t>(block_size(cfg, false)));
  CHECK(f[0] == 1.0);
  for (size_t i = 1; i < f.size(); ++i) CHECK(f[i] == 0.0);
}

TEST_CASE("hand-computed feature block at degree 2, lag 1") {
  // standardized z_t = 2 and z_{t-1} = -1 gives [1, 2, -1, 4, 1]
  StandardizationStats st = unit_stats(2, 1, 1);
  BasisConfig cfg{2, 1, false};
  InflowFn inflow = [](int t, int) { return t == 2 ? 2.0 : -1.0; };
  auto f = features(inflow, st, 2, 0, cfg, 1);
  REQUIRE(f.size() == 5);
  CHECK(f[0] == 1.0);
  CHECK(f[1] == 2.0);
  CHECK(f[2] == -1.0);
  CHECK(f[3] == 4.0);
  CHECK(f[4] == 1.0);
}

TEST_CASE("complement block uses the aggregate of the other reservoirs") {
  StandardizationStats st = unit_stats(1, 2, 0);
  st.mu_c = {0.0, 0.0};
  st.sigma_c = {1.0, 1.0};
  BasisConfig cfg{1, 0, true};
  // own inflow 0, other reservoir 0.5
  InflowFn inflow = [](int, int h) { return h == 0 ? 0.0 : 0.5; };
  auto f = features(inflow, st, 1, 0, cfg, 2);
  REQUIRE(f.size() == 3);  // intercept, own k=1, complement k=1
  CHECK(f[0] == 1.0);
  CHECK(f[1] == 0.0);
  CHECK(f[2] == 0.5);
}

TEST_CASE("powers match std::pow and features are pure") {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  StandardizationStats st = unit_stats(1, 1, 3);
  BasisConfig cfg{6, 3, false};
  for (int trial = 0; trial < 50; ++trial) {
    double vals[4] = {u(rng), u(rng), u(rng), u(rng)};  // stages 1, 0, -1, -2
    InflowFn inflow = [&](int t, int) { return vals[1 - t]; };
    auto f1 = features(inflow, st, 1, 0, cfg, 1);
    auto f2 = features(inflow, st, 1, 0, cfg, 1);
    CHECK(f1 == f2);  // purity: bitwise identical
    // entry for (k, l) sits at 1 + (k-1)*4 + l and must equal z_l^k
    for (int k = 1; k <= 6; ++k)
      for (int l = 0; l <= 3; ++l)
        CHECK(f1[1 + (k - 1) * 4 + l] == doctest::Approx(std::pow(vals[l], k)).epsilon(1e-12));
  }
}

TEST_CASE("short window is rejected") {
  StandardizationStats st = unit_stats(2, 1, 0);
  BasisConfig cfg{1, 1, false};
  InflowFn inflow = [](int, int) { return 1.0; };
  CHECK_THROWS_AS(features(inflow, st, 1, 0, cfg, 1), std::invalid_argument);
  CHECK_NOTHROW(features(inflow, st, 2, 0, cfg, 1));
}
