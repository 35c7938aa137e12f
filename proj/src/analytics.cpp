#include "ldr/analytics.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

#include "ldr/errors.hpp"
#include "ldr/util.hpp"
#include "json.hpp"

namespace ldr {

namespace {

// Nearest-rank percentile over an ascending copy: rank = ceil(p*n), 1-based.
double nearest_rank(std::vector<double> sorted, double p) {
  int n = static_cast<int>(sorted.size());
  int rank = static_cast<int>(std::ceil(p * n));
  rank = std::clamp(rank, 1, n);
  return sorted[rank - 1];
}

}  // namespace

CostMetrics cost_metrics(const std::vector<double>& costs) {
  if (costs.empty()) throw std::invalid_argument("cost_metrics: empty sample");
  std::vector<double> sorted = costs;
  std::sort(sorted.begin(), sorted.end());
  CostMetrics m;
  double sum = 0.0;
  for (double c : costs) sum += c;
  m.mean = sum / costs.size();
  m.p5 = nearest_rank(sorted, 0.05);
  m.p95 = nearest_rank(sorted, 0.95);
  m.spread = m.p95 - m.p5;
  return m;
}

SparsityMetrics sparsity_metrics(const LdrPolicy& policy, const LdrPolicy& theta0) {
  if (policy.index.size() != theta0.index.size() ||
      !std::equal(policy.index.begin(), policy.index.end(), theta0.index.begin()))
    throw std::invalid_argument("sparsity_metrics: mismatched index sets");

  SparsityMetrics m;
  int max_lag = policy.basis.max_lag;
  std::vector<int> nz_by_lag(max_lag + 1, 0), count_by_lag(max_lag + 1, 0);
  int nonzero = 0, total = 0;
  double l1 = 0.0, l1_0 = 0.0;
  for (size_t i = 0; i < policy.index.size(); ++i) {
    if (policy.index[i].k == 0) continue;
    ++total;
    ++count_by_lag[policy.index[i].l];
    double a = std::abs(policy.theta[i]);
    l1 += a;
    l1_0 += std::abs(theta0.theta[i]);
    if (a > kZeroTol) {
      ++nonzero;
      ++nz_by_lag[policy.index[i].l];
    }
  }
  m.nonzero_fraction = total > 0 ? static_cast<double>(nonzero) / total : 0.0;
  m.nonzero_by_lag.resize(max_lag + 1);
  for (int l = 0; l <= max_lag; ++l)
    m.nonzero_by_lag[l] =
        count_by_lag[l] > 0 ? static_cast<double>(nz_by_lag[l]) / count_by_lag[l] : 0.0;
  m.l1_shrinkage = l1_0 > 0.0 ? 1.0 - l1 / l1_0 : 0.0;
  return m;
}

SpotMetrics spot_metrics(const SimulationResult& sim, int window_first, int window_last) {
  if (window_first < 1 || window_last > sim.horizon || window_first > window_last)
    throw std::invalid_argument("spot_metrics: window outside horizon");
  int S = sim.n_scenarios;
  int W = window_last - window_first + 1;

  SpotMetrics m;
  std::vector<double> annual(S, 0.0);
  for (int s = 0; s < S; ++s) {
    double sum = 0.0;
    for (int t = window_first; t <= window_last; ++t) sum += sim.spot_at(s, t);
    annual[s] = sum / W;
  }
  CostMetrics cm = cost_metrics(annual);
  m.mean = cm.mean;
  m.p5 = cm.p5;
  m.p95 = cm.p95;

  double unc = 0.0;
  std::vector<double> stage(S);
  for (int t = window_first; t <= window_last; ++t) {
    for (int s = 0; s < S; ++s) stage[s] = sim.spot_at(s, t);
    std::sort(stage.begin(), stage.end());
    unc += nearest_rank(stage, 0.95) - nearest_rank(stage, 0.05);
  }
  m.avg_uncertainty = unc / W;

  // Eq.-31-style mean absolute relative change over the window, skipping (and
  // counting) zero-price denominators.
  double tv = 0.0;
  int skipped = 0;
  double p = 1.0 / S;
  for (int s = 0; s < S; ++s) {
    double sum = 0.0;
    for (int t = window_first + 1; t <= window_last; ++t) {
      double prev = sim.spot_at(s, t - 1);
      if (prev == 0.0) {
        ++skipped;
        continue;
      }
      sum += std::abs(sim.spot_at(s, t) - prev) / prev;
    }
    tv += p * sum;
  }
  m.time_variability = W > 1 ? tv / (W - 1) : 0.0;
  m.skipped_ratio_terms = skipped;
  return m;
}

const SweepRow& SweepReport::row(double lambda) const {
  for (const auto& r : rows)
    if (r.lambda == lambda) return r;
  throw std::invalid_argument("SweepReport: lambda not in report");
}

int select_best_row(const std::vector<SweepRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("select_best_row: no rows");
  int best = 0;
  for (int i = 1; i < static_cast<int>(rows.size()); ++i)
    if (rows[i].z_M < rows[best].z_M) best = i;
  return best;
}

std::vector<double> default_lambda_grid() {
  std::vector<double> g{0.0};
  for (int k = -1; k <= 6; ++k) g.push_back(std::pow(10.0, k));
  return g;
}

SweepReport sweep(const HydroSystem& system, const ScenarioSet& scenarios_in,
                  const ScenarioSet& scenarios_out, const BasisConfig& basis,
                  std::vector<double> grid, const SweepConfig& config) {
  if (grid.empty()) grid = default_lambda_grid();
  for (double l : grid)
    if (l < 0) throw ConfigError("sweep: lambda grid values must be >= 0");
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid[0] != 0.0) grid.insert(grid.begin(), 0.0);  // theta(0) is needed regardless

  // Baseline first: estimate theta(0) and derive the weights.
  EstimateInfo info0;
  LdrPolicy theta0;
  try {
    theta0 = estimate(system, scenarios_in, basis, 0.0, nullptr, &info0);
  } catch (const std::exception& e) {
    throw LpFailure("sweep at lambda=0: " + std::string(e.what()));
  }
  AdalassoWeights weights = adalasso_weights(theta0);
  auto penalized = penalized_positions(theta0.index);

  int n_lambda = static_cast<int>(grid.size());
  std::vector<SweepRow> rows(n_lambda);
  std::vector<LdrPolicy> policies(n_lambda);
  policies[0] = theta0;

  int jobs = std::max(1, config.jobs);
  int workers = std::min(jobs, n_lambda);
  int sim_jobs = std::max(1, jobs / workers);
  std::atomic<int> cursor{0};
  std::mutex mu;
  std::vector<std::string> errors;

  auto run_lambda = [&](int gi) {
    double lambda = grid[gi];
    SweepRow row;
    row.lambda = lambda;
    LdrPolicy policy;
    if (gi == 0) {
      policy = theta0;
      row.estimate_seconds = info0.solve_seconds;
      row.in_sample_cost = theta0.in_sample_cost;
    } else {
      EstimateInfo info;
      policy = estimate(system, scenarios_in, basis, lambda, &weights, &info);
      row.estimate_seconds = info.solve_seconds;
      row.in_sample_cost = policy.in_sample_cost;
    }

    SttConfig stt_cfg = config.stt;
    stt_cfg.jobs = sim_jobs;
    stt_cfg.keep_decisions = false;
    auto t0 = std::chrono::steady_clock::now();
    SimulationResult sim = simulate(system, policy, scenarios_out, stt_cfg);
    row.simulate_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    CostMetrics cm = cost_metrics(sim.scenario_cost);
    row.z_M = sim.z_M;
    row.p5 = cm.p5;
    row.p95 = cm.p95;
    SparsityMetrics sm = sparsity_metrics(policy, theta0);
    row.nonzero_fraction = sm.nonzero_fraction;
    row.l1_shrinkage = sm.l1_shrinkage;
    double wl1 = 0.0;
    for (size_t p = 0; p < penalized.size(); ++p)
      wl1 += weights.w[p] * std::abs(policy.theta[penalized[p]]);
    row.weighted_l1 = wl1;

    {
      std::lock_guard<std::mutex> lock(mu);
      rows[gi] = row;
      policies[gi] = policy;
      if (config.on_policy) config.on_policy(row, policy, sim);
    }
  };

  auto worker = [&]() {
    for (;;) {
      int gi = cursor.fetch_add(1);
      if (gi >= n_lambda) return;
      try {
        run_lambda(gi);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(mu);
        errors.push_back("lambda=" + lambda_tag(grid[gi]) + ": " + e.what());
      }
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (!errors.empty()) throw LpFailure("sweep failed: " + errors[0]);

  SweepReport report;
  report.rows = std::move(rows);
  int best = select_best_row(report.rows);
  report.selected_lambda = report.rows[best].lambda;
  double z0 = report.rows[0].z_M;
  report.gain = z0 != 0.0 ? (z0 - report.rows[best].z_M) / z0 : 0.0;
  return report;
}

void save_sweep_csv(const SweepReport& report, const std::string& path) {
  std::ostringstream out;
  out << "lambda,in_sample_cost,z_M,P5,P95,nonzero_fraction,l1_shrinkage,weighted_l1,"
         "estimate_seconds,simulate_seconds,selected\n";
  for (const auto& r : report.rows)
    out << format_double(r.lambda) << ',' << format_double(r.in_sample_cost) << ','
        << format_double(r.z_M) << ',' << format_double(r.p5) << ',' << format_double(r.p95)
        << ',' << format_double(r.nonzero_fraction) << ',' << format_double(r.l1_shrinkage)
        << ',' << format_double(r.weighted_l1) << ',' << format_double(r.estimate_seconds)
        << ',' << format_double(r.simulate_seconds) << ','
        << (r.lambda == report.selected_lambda ? 1 : 0) << '\n';
  atomic_write_file(path, out.str());
}

void save_sweep_json(const SweepReport& report, const std::string& path) {
  nlohmann::json j;
  j["selected_lambda"] = report.selected_lambda;
  j["gain"] = report.gain;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : report.rows)
    j["rows"].push_back({{"lambda", r.lambda},
                         {"in_sample_cost", r.in_sample_cost},
                         {"z_M", r.z_M},
                         {"P5", r.p5},
                         {"P95", r.p95},
                         {"nonzero_fraction", r.nonzero_fraction},
                         {"l1_shrinkage", r.l1_shrinkage},
                         {"weighted_l1", r.weighted_l1},
                         {"estimate_seconds", r.estimate_seconds},
                         {"simulate_seconds", r.simulate_seconds}});
  atomic_write_file(path, j.dump(2) + "\n");
}

}  // namespace ldr
