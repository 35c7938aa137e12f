#pragma once

#include <functional>
#include <vector>

#include "ldr/scenario.hpp"
#include "ldr/system.hpp"

namespace ldr {

// Polynomial feature basis over standardized inflows. Lag l = 0 is the current
// stage t, l = max_lag is stage t - max_lag.
struct BasisConfig {
  int max_degree = 1;               // highest polynomial power (0 = intercept only)
  int max_lag = 0;                  // tau; the window holds max_lag + 1 stages
  bool include_complement = true;   // ignored for single-reservoir systems
};

// Position of one LDR coefficient. t and h are 1-based as in the policy CSV;
// r = 1 is the reservoir's own inflow, r = 2 the complement aggregate.
// k = 0 (the intercept) only occurs with l = 0, r = 1.
struct CoefficientIndex {
  int t = 0;
  int h = 0;
  int k = 0;
  int l = 0;
  int r = 1;

  bool operator==(const CoefficientIndex&) const = default;
};

bool complement_active(const HydroSystem& system, const BasisConfig& config);

// Number of coefficients per (t, h) block.
int block_size(const BasisConfig& config, bool complement);

// Canonical coefficient enumeration, ordered lexicographically by (t, h, r, k, l).
std::vector<CoefficientIndex> index_set(const HydroSystem& system, const BasisConfig& config);

// Inflow accessor over stages t - max_lag .. t (t <= 0 reaches into history).
using InflowFn = std::function<double(int t, int h)>;

// Feature vector for the (t, h) block, aligned with index_set restricted to
// (t, h): intercept first, then own powers (k, l), then complement powers.
// h is 0-based here; stats must cover all lag stages of the window.
std::vector<double> features(const InflowFn& inflow, const StandardizationStats& stats,
                             int t, int h, const BasisConfig& config, int n_reservoirs);

}  // namespace ldr
