#pragma once

#include <string>
#include <vector>

#include "ldr/estimator.hpp"
#include "ldr/scenario.hpp"
#include "ldr/system.hpp"

namespace ldr {

// State-target tracking settings. gamma = 0 picks the default rule
// 10 * deficit_cost * max(production_factor); any explicit gamma must exceed
// deficit_cost * max(production_factor) or deviating beats serving load.
struct SttConfig {
  double gamma = 0.0;
  double spill_penalty = 0.0;      // optional, default off
  // Enforce v >= v_f at the last stage, capped at v_prev + inflow when a dry
  // path makes the full level unattainable.
  bool apply_vf_at_T = true;
  bool keep_decisions = true;      // store full per-stage decisions
  int jobs = 1;                    // parallel scenarios in simulate()
};

double effective_gamma(const HydroSystem& system, const SttConfig& config);

// Implemented dispatch for one (scenario, stage).
struct StageDecision {
  std::vector<double> g;        // thermal outputs, avgMW
  std::vector<double> u, s;     // turbined / spilled volumes
  std::vector<double> f;        // line flows (empty for single bus)
  std::vector<double> delta;    // load shed per bus
  std::vector<double> v;        // end-of-stage storage
  std::vector<double> e_plus, e_minus;  // target deviations
  std::vector<double> spot_by_bus;      // energy-balance duals, undiscounted
  double spot = 0.0;       // single-bus dual; demand-weighted mean otherwise
  double stage_cost = 0.0;  // c'g + c_d'delta, undiscounted, deviations excluded
};

struct SimulationResult {
  int n_scenarios = 0;
  int horizon = 0;
  std::vector<double> scenario_cost;     // discounted total per scenario
  std::vector<double> spot;              // [s*horizon + t-1]
  std::vector<StageDecision> decisions;  // [s*horizon + t-1]; empty unless kept
  double z_M = 0.0;                      // mean of scenario_cost

  // Residual/diagnostic maxima over every simulated stage.
  double max_water_residual = 0.0;
  double max_energy_residual = 0.0;
  double max_deviation_overlap = 0.0;  // max over (s,t,h) of min(e+, e-)

  double spot_at(int s, int t) const { return spot[s * horizon + t - 1]; }
  const StageDecision& decision(int s, int t) const { return decisions[s * horizon + t - 1]; }
};

// Solves the single-period tracking LP for stage t given the storage vector
// entering the stage and the inflow window (via inflow(t', h), t' <= t).
StageDecision stt_step(const HydroSystem& system, const LdrPolicy& policy,
                       const std::vector<double>& v_prev, const InflowFn& inflow,
                       int t, const SttConfig& config);

// Chronological rollout of the policy over every scenario, starting at v0.
SimulationResult simulate(const HydroSystem& system, const LdrPolicy& policy,
                          const ScenarioSet& scenarios, const SttConfig& config);

// Long-format export (scenario,stage,variable,value); requires kept decisions.
void save_simulation_csv(const SimulationResult& sim, const std::string& path);
// Per-scenario discounted cost (scenario,cost).
void save_cost_summary_csv(const SimulationResult& sim, const std::string& path);

}  // namespace ldr
