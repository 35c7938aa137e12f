#include "ldr/stt.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "ldr/errors.hpp"
#include "ldr/lp.hpp"
#include "ldr/util.hpp"

namespace ldr {

double effective_gamma(const HydroSystem& system, const SttConfig& config) {
  double max_rho = 0.0;
  for (const auto& h : system.hydros) max_rho = std::max(max_rho, h.production_factor);
  double floor = system.deficit_cost * max_rho;
  if (config.gamma == 0.0) return 10.0 * std::max(floor, 1.0);
  if (config.gamma <= floor)
    throw ConfigError("stt: gamma must exceed deficit_cost * max production_factor (" +
                      format_double(floor) + ")");
  return config.gamma;
}

StageDecision stt_step(const HydroSystem& system, const LdrPolicy& policy,
                       const std::vector<double>& v_prev, const InflowFn& inflow, int t,
                       const SttConfig& config) {
  const int G = system.n_thermals();
  const int H = system.n_hydros();
  const int B = system.n_buses();
  const int F = static_cast<int>(system.lines.size());
  const double gamma = effective_gamma(system, config);
  auto M = system.topology_matrix();

  LpModel lp;
  std::vector<int> gv(G), uv(H), sv(H), vv(H), epv(H), emv(H), dv(B), fv(F);
  for (int i = 0; i < G; ++i)
    gv[i] = lp.add_variable("g" + std::to_string(i + 1), 0.0, system.thermals[i].capacity,
                            system.thermals[i].variable_cost);
  for (int h = 0; h < H; ++h)
    uv[h] = lp.add_variable("u" + std::to_string(h + 1), 0.0, system.hydros[h].u_max, 0.0);
  for (int h = 0; h < H; ++h)
    sv[h] = lp.add_variable("sp" + std::to_string(h + 1), 0.0, kInf, config.spill_penalty);
  for (int h = 0; h < H; ++h) {
    double lo = system.hydros[h].v_min;
    if (t == system.horizon && config.apply_vf_at_T) {
      // Hard final bound, capped at the physically attainable level so a dry
      // out-of-sample path cannot make the stage LP infeasible.
      double attainable = v_prev[h] + inflow(t, h);
      lo = std::max(lo, std::min(system.hydros[h].v_f, attainable));
    }
    vv[h] = lp.add_variable("v" + std::to_string(h + 1), lo, system.hydros[h].v_max, 0.0);
  }
  for (int b = 0; b < B; ++b)
    dv[b] = lp.add_variable("dl" + std::to_string(b + 1), 0.0, kInf, system.deficit_cost);
  for (int f = 0; f < F; ++f)
    fv[f] = lp.add_variable("f" + std::to_string(f + 1), -system.lines[f].capacity,
                            system.lines[f].capacity, 0.0);
  for (int h = 0; h < H; ++h)
    epv[h] = lp.add_variable("ep" + std::to_string(h + 1), 0.0, kInf, gamma);
  for (int h = 0; h < H; ++h)
    emv[h] = lp.add_variable("em" + std::to_string(h + 1), 0.0, kInf, gamma);

  std::vector<int> en_row(B);
  std::vector<std::pair<int, double>> terms;
  for (int b = 0; b < B; ++b) {
    terms.clear();
    for (int i = 0; i < G; ++i)
      if (system.thermals[i].bus == b) terms.push_back({gv[i], 1.0});
    for (int h = 0; h < H; ++h)
      if (system.hydros[h].bus == b)
        terms.push_back({uv[h], system.hydros[h].production_factor});
    for (int f = 0; f < F; ++f) {
      if (system.lines[f].to == b) terms.push_back({fv[f], 1.0});
      if (system.lines[f].from == b) terms.push_back({fv[f], -1.0});
    }
    terms.push_back({dv[b], 1.0});
    en_row[b] = lp.add_constraint(B > 1 ? "en" + std::to_string(b + 1) : "en", terms,
                                  RowSense::Equal, system.bus_demand_at(b, t));
  }
  for (int h = 0; h < H; ++h) {
    terms.clear();
    terms.push_back({vv[h], 1.0});
    for (int hh = 0; hh < H; ++hh) {
      if (M[h][hh] == 0.0) continue;
      terms.push_back({uv[hh], M[h][hh]});
      terms.push_back({sv[hh], M[h][hh]});
    }
    lp.add_constraint("wa" + std::to_string(h + 1), terms, RowSense::Equal,
                      v_prev[h] + inflow(t, h));
  }

  // storage targets from the policy
  std::vector<double> target(H);
  for (int h = 0; h < H; ++h) {
    auto f = features(inflow, policy.stats, t, h, policy.basis, H);
    int off = policy.block_offset(t, h);
    double val = 0.0;
    for (size_t j = 0; j < f.size(); ++j) val += f[j] * policy.theta[off + j];
    target[h] = val;
    lp.add_constraint("tg" + std::to_string(h + 1), {{vv[h], 1.0}, {epv[h], 1.0}, {emv[h], -1.0}},
                      RowSense::Equal, val);
  }

  LpSolution sol = solve(lp);
  if (sol.status != LpStatus::Optimal) {
    std::ostringstream msg;
    msg << "stt stage LP " << to_string(sol.status) << " at t=" << t;
    if (!sol.message.empty()) msg << " (" << sol.message << ")";
    throw LpFailure(msg.str());
  }

  StageDecision dec;
  dec.g.resize(G);
  for (int i = 0; i < G; ++i) dec.g[i] = sol.x[gv[i]];
  dec.u.resize(H);
  dec.s.resize(H);
  dec.v.resize(H);
  dec.e_plus.resize(H);
  dec.e_minus.resize(H);
  for (int h = 0; h < H; ++h) {
    dec.u[h] = sol.x[uv[h]];
    dec.s[h] = sol.x[sv[h]];
    dec.v[h] = sol.x[vv[h]];
    dec.e_plus[h] = sol.x[epv[h]];
    dec.e_minus[h] = sol.x[emv[h]];
  }
  dec.delta.resize(B);
  for (int b = 0; b < B; ++b) dec.delta[b] = sol.x[dv[b]];
  dec.f.resize(F);
  for (int f = 0; f < F; ++f) dec.f[f] = sol.x[fv[f]];
  dec.spot_by_bus.resize(B);
  double wsum = 0.0, dsum = 0.0;
  for (int b = 0; b < B; ++b) {
    dec.spot_by_bus[b] = sol.y[en_row[b]];
    double d = system.bus_demand_at(b, t);
    wsum += dec.spot_by_bus[b] * d;
    dsum += d;
  }
  dec.spot = (B == 1) ? dec.spot_by_bus[0] : (dsum > 0 ? wsum / dsum : dec.spot_by_bus[0]);
  double cost = 0.0;
  for (int i = 0; i < G; ++i) cost += system.thermals[i].variable_cost * dec.g[i];
  for (int b = 0; b < B; ++b) cost += system.deficit_cost * dec.delta[b];
  dec.stage_cost = cost;
  return dec;
}

SimulationResult simulate(const HydroSystem& system, const LdrPolicy& policy,
                          const ScenarioSet& scenarios, const SttConfig& config) {
  if (scenarios.history_stages() < policy.basis.max_lag)
    throw ConfigError("simulate: scenario history shorter than the policy's max_lag");
  if (scenarios.n_reservoirs != system.n_hydros())
    throw ConfigError("simulate: scenario reservoir count differs from system");
  if (scenarios.horizon != system.horizon)
    throw ConfigError("simulate: scenario horizon differs from system horizon");
  effective_gamma(system, config);  // validate up front

  const int T = system.horizon;
  const int H = system.n_hydros();
  const int S = scenarios.n_scenarios;
  auto M = system.topology_matrix();

  SimulationResult res;
  res.n_scenarios = S;
  res.horizon = T;
  res.scenario_cost.assign(S, 0.0);
  res.spot.assign(static_cast<size_t>(S) * T, 0.0);
  if (config.keep_decisions) res.decisions.resize(static_cast<size_t>(S) * T);

  std::atomic<int> next{0};
  std::vector<double> wa_res_w(std::max(1, config.jobs), 0.0);
  std::vector<double> en_res_w(std::max(1, config.jobs), 0.0);
  std::vector<double> cmpl_w(std::max(1, config.jobs), 0.0);
  std::vector<std::string> errors(std::max(1, config.jobs));

  auto worker = [&](int wid) {
    for (;;) {
      int s = next.fetch_add(1);
      if (s >= S) return;
      try {
        InflowFn inflow = [&scenarios, s](int t, int h) { return scenarios.inflow(s, t, h); };
        std::vector<double> v_prev(H);
        for (int h = 0; h < H; ++h) v_prev[h] = system.hydros[h].v0;
        double total = 0.0;
        for (int t = 1; t <= T; ++t) {
          StageDecision dec;
          try {
            dec = stt_step(system, policy, v_prev, inflow, t, config);
          } catch (const LpFailure& e) {
            throw LpFailure("scenario " + std::to_string(s + 1) + ": " + e.what());
          }
          total += discount_factor(system, t) * dec.stage_cost;
          res.spot[static_cast<size_t>(s) * T + t - 1] = dec.spot;

          // residual bookkeeping
          for (int h = 0; h < H; ++h) {
            double lhs = dec.v[h] - v_prev[h];
            for (int hh = 0; hh < H; ++hh)
              if (M[h][hh] != 0.0) lhs += M[h][hh] * (dec.u[hh] + dec.s[hh]);
            wa_res_w[wid] =
                std::max(wa_res_w[wid], std::abs(lhs - scenarios.inflow(s, t, h)));
            cmpl_w[wid] = std::max(cmpl_w[wid], std::min(dec.e_plus[h], dec.e_minus[h]));
          }
          for (int b = 0; b < system.n_buses(); ++b) {
            double lhs = dec.delta[b];
            for (int i = 0; i < system.n_thermals(); ++i)
              if (system.thermals[i].bus == b) lhs += dec.g[i];
            for (int h = 0; h < H; ++h)
              if (system.hydros[h].bus == b) lhs += system.hydros[h].production_factor * dec.u[h];
            for (size_t f = 0; f < system.lines.size(); ++f) {
              if (system.lines[f].to == b) lhs += dec.f[f];
              if (system.lines[f].from == b) lhs -= dec.f[f];
            }
            en_res_w[wid] = std::max(en_res_w[wid], std::abs(lhs - system.bus_demand_at(b, t)));
          }

          v_prev = dec.v;
          if (config.keep_decisions)
            res.decisions[static_cast<size_t>(s) * T + t - 1] = std::move(dec);
        }
        res.scenario_cost[s] = total;
      } catch (const std::exception& e) {
        if (errors[wid].empty()) errors[wid] = e.what();
        return;
      }
    }
  };

  int jobs = std::max(1, config.jobs);
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) pool.emplace_back(worker, w);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (!e.empty()) throw LpFailure(e);

  for (int w = 0; w < std::max(1, config.jobs); ++w) {
    res.max_water_residual = std::max(res.max_water_residual, wa_res_w[w]);
    res.max_energy_residual = std::max(res.max_energy_residual, en_res_w[w]);
    res.max_deviation_overlap = std::max(res.max_deviation_overlap, cmpl_w[w]);
  }
  double sum = 0.0;
  for (double c : res.scenario_cost) sum += c;
  res.z_M = sum / S;
  return res;
}

void save_simulation_csv(const SimulationResult& sim, const std::string& path) {
  if (sim.decisions.empty()) throw IoError("save_simulation_csv: decisions were not kept");
  std::ostringstream out;
  out << "scenario,stage,variable,value\n";
  auto row = [&](int s, int t, const std::string& var, double val) {
    out << s + 1 << ',' << t << ',' << var << ',' << format_double(val) << '\n';
  };
  for (int s = 0; s < sim.n_scenarios; ++s)
    for (int t = 1; t <= sim.horizon; ++t) {
      const StageDecision& d = sim.decision(s, t);
      for (size_t i = 0; i < d.g.size(); ++i) row(s, t, "g" + std::to_string(i + 1), d.g[i]);
      for (size_t h = 0; h < d.u.size(); ++h) {
        std::string n = std::to_string(h + 1);
        row(s, t, "u" + n, d.u[h]);
        row(s, t, "s" + n, d.s[h]);
        row(s, t, "v" + n, d.v[h]);
        row(s, t, "e_plus" + n, d.e_plus[h]);
        row(s, t, "e_minus" + n, d.e_minus[h]);
      }
      for (size_t f = 0; f < d.f.size(); ++f) row(s, t, "f" + std::to_string(f + 1), d.f[f]);
      for (size_t b = 0; b < d.delta.size(); ++b)
        row(s, t, "delta" + (d.delta.size() > 1 ? std::to_string(b + 1) : ""), d.delta[b]);
      row(s, t, "spot", d.spot);
      row(s, t, "stage_cost", d.stage_cost);
    }
  atomic_write_file(path, out.str());
}

void save_cost_summary_csv(const SimulationResult& sim, const std::string& path) {
  std::ostringstream out;
  out << "scenario,cost\n";
  for (int s = 0; s < sim.n_scenarios; ++s)
    out << s + 1 << ',' << format_double(sim.scenario_cost[s]) << '\n';
  atomic_write_file(path, out.str());
}

}  // namespace ldr
