#pragma once

#include <string>
#include <vector>

#include "ldr/estimator.hpp"
#include "ldr/stt.hpp"

namespace ldr {

struct CostMetrics {
  double mean = 0.0;
  double p5 = 0.0;
  double p95 = 0.0;
  double spread = 0.0;  // p95 - p5
};

// Nearest-rank percentiles (rank = ceil(p*n) over the ascending sample), so
// every reported percentile is an observed value.
CostMetrics cost_metrics(const std::vector<double>& costs);

struct SparsityMetrics {
  double nonzero_fraction = 0.0;          // non-intercept |theta| > kZeroTol
  std::vector<double> nonzero_by_lag;     // fraction per lag l = 0..max_lag
  double l1_shrinkage = 0.0;              // 1 - |theta|_1 / |theta0|_1
};

SparsityMetrics sparsity_metrics(const LdrPolicy& policy, const LdrPolicy& theta0);

struct SpotMetrics {
  double mean = 0.0;  // over scenarios, of the window-average spot
  double p5 = 0.0;
  double p95 = 0.0;
  double avg_uncertainty = 0.0;   // mean over window stages of per-stage P95-P5
  double time_variability = 0.0;  // mean absolute relative stage-to-stage change
  int skipped_ratio_terms = 0;    // zero-spot denominators dropped (data-quality)
};

// central window: inclusive stage range [first, last], e.g. 7..18 for the
// twelve central months of a 24-stage run.
SpotMetrics spot_metrics(const SimulationResult& sim, int window_first, int window_last);

struct SweepRow {
  double lambda = 0.0;
  double in_sample_cost = 0.0;
  double z_M = 0.0;
  double p5 = 0.0;
  double p95 = 0.0;
  double nonzero_fraction = 0.0;
  double l1_shrinkage = 0.0;
  double weighted_l1 = 0.0;  // sum w|theta| over penalized entries
  double estimate_seconds = 0.0;
  double simulate_seconds = 0.0;
};

struct SweepReport {
  std::vector<SweepRow> rows;  // ascending lambda
  double selected_lambda = 0.0;
  double gain = 0.0;  // (z_M(0) - z_M(selected)) / z_M(0)

  const SweepRow& row(double lambda) const;
};

// Grid for lambda when the user gives none: {0} plus decades 1e-1 .. 1e6.
std::vector<double> default_lambda_grid();

// Index of the row with minimal z_M; ties go to the lowest lambda (rows are
// sorted ascending, so the first minimum wins).
int select_best_row(const std::vector<SweepRow>& rows);

struct SweepConfig {
  SttConfig stt;
  int jobs = 1;
  // Callback hook so the CLI can persist per-lambda artifacts as they finish.
  std::function<void(const SweepRow&, const LdrPolicy&, const SimulationResult&)> on_policy;
};

// Estimates theta(0), derives AdaLASSO weights, estimates every lambda in the
// grid (0 is prepended if missing), simulates each policy out of sample and
// selects the argmin z_M with lowest-lambda tie-breaking.
SweepReport sweep(const HydroSystem& system, const ScenarioSet& scenarios_in,
                  const ScenarioSet& scenarios_out, const BasisConfig& basis,
                  std::vector<double> grid, const SweepConfig& config);

void save_sweep_csv(const SweepReport& report, const std::string& path);
void save_sweep_json(const SweepReport& report, const std::string& path);

}  // namespace ldr
