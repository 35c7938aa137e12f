#include "ldr/basis.hpp"

#include <stdexcept>

namespace ldr {

bool complement_active(const HydroSystem& system, const BasisConfig& config) {
  return config.include_complement && system.n_hydros() >= 2;
}

int block_size(const BasisConfig& config, bool complement) {
  int per_family = config.max_degree * (config.max_lag + 1);
  return 1 + per_family + (complement ? per_family : 0);
}

std::vector<CoefficientIndex> index_set(const HydroSystem& system, const BasisConfig& config) {
  if (config.max_degree < 0) throw std::invalid_argument("index_set: max_degree must be >= 0");
  if (config.max_lag < 0) throw std::invalid_argument("index_set: max_lag must be >= 0");
  bool complement = complement_active(system, config);
  std::vector<CoefficientIndex> out;
  out.reserve(static_cast<size_t>(system.horizon) * system.n_hydros() *
              block_size(config, complement));
  for (int t = 1; t <= system.horizon; ++t) {
    for (int h = 1; h <= system.n_hydros(); ++h) {
      out.push_back({t, h, 0, 0, 1});  // intercept: L_0 = {0}
      for (int k = 1; k <= config.max_degree; ++k)
        for (int l = 0; l <= config.max_lag; ++l) out.push_back({t, h, k, l, 1});
      if (complement)
        for (int k = 1; k <= config.max_degree; ++k)
          for (int l = 0; l <= config.max_lag; ++l) out.push_back({t, h, k, l, 2});
    }
  }
  return out;
}

std::vector<double> features(const InflowFn& inflow, const StandardizationStats& stats,
                             int t, int h, const BasisConfig& config, int n_reservoirs) {
  if (t - config.max_lag < 1 - stats.lag_stages)
    throw std::invalid_argument("features: window shorter than max_lag + 1");
  bool complement = config.include_complement && n_reservoirs >= 2;
  std::vector<double> out;
  out.reserve(block_size(config, complement));
  out.push_back(1.0);

  int L = config.max_lag + 1;
  std::vector<double> z_own(L), z_comp(complement ? L : 0);
  for (int l = 0; l < L; ++l) {
    int ts = t - l;
    z_own[l] = (inflow(ts, h) - stats.mu_at(ts, h)) / stats.sigma_at(ts, h);
    if (complement) {
      double sum = 0.0;
      for (int hh = 0; hh < n_reservoirs; ++hh)
        if (hh != h) sum += inflow(ts, hh);
      z_comp[l] = (sum - stats.mu_c_at(ts, h)) / stats.sigma_c_at(ts, h);
    }
  }

  // Powers built by repeated multiplication, one base per lag.
  std::vector<double> pw(L, 1.0);
  for (int k = 1; k <= config.max_degree; ++k)
    for (int l = 0; l < L; ++l) {
      pw[l] *= z_own[l];
      out.push_back(pw[l]);
    }
  if (complement) {
    std::fill(pw.begin(), pw.end(), 1.0);
    for (int k = 1; k <= config.max_degree; ++k)
      for (int l = 0; l < L; ++l) {
        pw[l] *= z_comp[l];
        out.push_back(pw[l]);
      }
  }
  return out;
}

}  // namespace ldr
