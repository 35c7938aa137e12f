#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace ldr {

// Inflow paths for a set of equally likely scenarios, plus the deterministic
// pre-horizon history shared by all of them (needed by lagged LDR features).
struct ScenarioSet {
  int n_scenarios = 0;
  int horizon = 0;
  int n_reservoirs = 0;
  uint64_t seed = 0;

  // inflows[(s*horizon + (t-1))*n_reservoirs + h], t in 1..horizon
  std::vector<double> inflows;

  // history[h][j] is the inflow of reservoir h at stage j - history_stages() + 1,
  // i.e. history[h].back() is stage 0. All scenarios share it.
  std::vector<std::vector<double>> history;

  int history_stages() const { return history.empty() ? 0 : static_cast<int>(history[0].size()); }

  // Inflow at stage t (1-based); t <= 0 reads the shared history.
  double inflow(int s, int t, int h) const;
  double& at(int s, int t, int h);

  double probability() const { return 1.0 / n_scenarios; }
};

// Per-stage, per-reservoir standardization statistics for the LDR features,
// covering the pre-horizon lag stages as well. Degenerate sigmas are 1.
struct StandardizationStats {
  int horizon = 0;
  int n_reservoirs = 0;
  int lag_stages = 0;  // stats cover stages 1-lag_stages .. horizon

  std::vector<double> mu, sigma;      // [(t+lag_stages-1)*n_reservoirs + h]
  std::vector<double> mu_c, sigma_c;  // complement aggregate; empty if H < 2

  int offset(int t, int h) const { return (t + lag_stages - 1) * n_reservoirs + h; }
  double mu_at(int t, int h) const { return mu[offset(t, h)]; }
  double sigma_at(int t, int h) const { return sigma[offset(t, h)]; }
  double mu_c_at(int t, int h) const { return mu_c[offset(t, h)]; }
  double sigma_c_at(int t, int h) const { return sigma_c[offset(t, h)]; }
};

// Periodic lognormal inflow process for one reservoir, parameterized by the
// natural-scale monthly mean/std, with optional AR(1) dependence in log space.
struct ReservoirProcess {
  std::string name;
  std::array<double, 12> monthly_mean{};
  std::array<double, 12> monthly_std{};
  double ar1 = 0.0;             // in [0, 1); 0 = stagewise independent
  std::vector<double> history;  // pre-horizon inflows, oldest first
};

struct ScenarioProcessSpec {
  std::vector<ReservoirProcess> reservoirs;
};

// Stage 1 is calendar month 1; stage t maps to month ((t-1) mod 12) + 1.
int month_of_stage(int t);

// Monte Carlo sampling of the process spec. Reproducible for a given seed and
// independent per (scenario, reservoir) substream, so it parallelizes cleanly.
ScenarioSet generate(const ScenarioProcessSpec& spec, int n, int horizon, uint64_t seed);

// Sum of inflows over all reservoirs except h, per scenario and stage (1..T).
// Throws std::invalid_argument for single-reservoir sets.
std::vector<std::vector<double>> complement_aggregate(const ScenarioSet& set, int h);

// Sample mean and population (divide-by-n) std over scenarios, per (t, h),
// including the shared history stages (whose sigma degenerates to 1).
StandardizationStats standardize_stats(const ScenarioSet& set);

// CSV exchange format: header "scenario,stage,reservoir,inflow"; rows with
// stage <= 0 carry the shared history (written once, under scenario 0).
void save_scenarios_csv(const ScenarioSet& set, const std::string& path);
ScenarioSet load_scenarios_csv(const std::string& path);

}  // namespace ldr
