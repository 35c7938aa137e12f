#pragma once

// Test-only oracles, built independently of the estimator/stt code paths.

#include <string>
#include <vector>

#include "ldr/lp.hpp"
#include "ldr/scenario.hpp"
#include "ldr/system.hpp"

namespace ldr::testing {

// Perfect-foresight dispatch cost for one scenario: the deterministic LP over
// the full horizon with storage as a plain decision (no decision rule). This
// is the reference value for single-scenario estimation and for deterministic
// closure checks.
inline double deterministic_dispatch_cost(const HydroSystem& sys, const ScenarioSet& set,
                                          int s, LpBackend backend = LpBackend::Simplex) {
  const int T = sys.horizon;
  const int H = sys.n_hydros();
  const int G = sys.n_thermals();
  auto M = sys.topology_matrix();

  LpModel lp;
  std::vector<std::vector<int>> g(T), u(T), sp(T), v(T);
  std::vector<int> dl(T);
  for (int t = 1; t <= T; ++t) {
    double disc = discount_factor(sys, t);
    auto& gt = g[t - 1];
    auto& ut = u[t - 1];
    auto& st = sp[t - 1];
    auto& vt = v[t - 1];
    std::string tag = "_" + std::to_string(t);
    for (int i = 0; i < G; ++i)
      gt.push_back(lp.add_variable("g" + std::to_string(i) + tag, 0.0,
                                   sys.thermals[i].capacity,
                                   disc * sys.thermals[i].variable_cost));
    for (int h = 0; h < H; ++h) {
      ut.push_back(lp.add_variable("u" + std::to_string(h) + tag, 0.0, sys.hydros[h].u_max, 0.0));
      st.push_back(lp.add_variable("s" + std::to_string(h) + tag, 0.0, kInf, 0.0));
      double lo = sys.hydros[h].v_min;
      if (t == T) lo = std::max(lo, sys.hydros[h].v_f);
      vt.push_back(lp.add_variable("v" + std::to_string(h) + tag, lo, sys.hydros[h].v_max, 0.0));
    }
    dl[t - 1] = lp.add_variable("d" + tag, 0.0, kInf, disc * sys.deficit_cost);
  }
  for (int t = 1; t <= T; ++t) {
    std::string tag = "_" + std::to_string(t);
    std::vector<std::pair<int, double>> terms;
    for (int i = 0; i < G; ++i) terms.push_back({g[t - 1][i], 1.0});
    for (int h = 0; h < H; ++h)
      terms.push_back({u[t - 1][h], sys.hydros[h].production_factor});
    terms.push_back({dl[t - 1], 1.0});
    lp.add_constraint("en" + tag, terms, RowSense::Equal, sys.demand_at(t));
    for (int h = 0; h < H; ++h) {
      terms.clear();
      terms.push_back({v[t - 1][h], 1.0});
      if (t > 1) terms.push_back({v[t - 2][h], -1.0});
      for (int hh = 0; hh < H; ++hh) {
        if (M[h][hh] == 0.0) continue;
        terms.push_back({u[t - 1][hh], M[h][hh]});
        terms.push_back({sp[t - 1][hh], M[h][hh]});
      }
      lp.add_constraint("wa" + std::to_string(h) + tag, terms, RowSense::Equal,
                        set.inflow(s, t, h) + (t == 1 ? sys.hydros[h].v0 : 0.0));
    }
  }
  LpSolution sol = solve(lp, backend);
  if (sol.status != LpStatus::Optimal)
    throw std::runtime_error("oracle LP not optimal: " + std::string(to_string(sol.status)));
  return sol.objective;
}

// A scenario set holding n copies of the same inflow path.
inline ScenarioSet replicate_path(const ScenarioSet& src, int s, int copies) {
  ScenarioSet out;
  out.n_scenarios = copies;
  out.horizon = src.horizon;
  out.n_reservoirs = src.n_reservoirs;
  out.history = src.history;
  out.seed = src.seed;
  out.inflows.resize(static_cast<size_t>(copies) * src.horizon * src.n_reservoirs);
  for (int c = 0; c < copies; ++c)
    for (int t = 1; t <= src.horizon; ++t)
      for (int h = 0; h < src.n_reservoirs; ++h) out.at(c, t, h) = src.inflow(s, t, h);
  return out;
}

}  // namespace ldr::testing
