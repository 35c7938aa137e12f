#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ldr/basis.hpp"
#include "ldr/lp.hpp"
#include "ldr/scenario.hpp"
#include "ldr/system.hpp"

namespace ldr {

// |theta| below this counts as zero: weights, sparsity metrics, and the
// lambda -> infinity limit all share it. Features are O(1) by construction,
// so an absolute threshold is meaningful.
constexpr double kZeroTol = 1e-6;

// Estimated LDR: coefficients in canonical index order plus everything needed
// to evaluate the rule out of sample (in-sample standardization stats).
struct LdrPolicy {
  std::vector<CoefficientIndex> index;
  std::vector<double> theta;
  StandardizationStats stats;
  BasisConfig basis;
  double lambda = 0.0;
  double in_sample_cost = 0.0;  // discounted operational cost, penalty excluded

  // Theta for the (t, h) block, aligned with features(); h is 0-based.
  // Blocks are contiguous because of the canonical (t, h, r, k, l) order.
  int block_offset(int t, int h) const;
  int block_len() const;
};

// 1/|theta0| weights over non-intercept coefficients; zeros replaced with 1.
struct AdalassoWeights {
  std::vector<double> w;  // aligned with the non-intercept subsequence of the index set
};

// Positions of the penalized (k > 0) entries within a canonical index set.
std::vector<int> penalized_positions(const std::vector<CoefficientIndex>& index);

AdalassoWeights adalasso_weights(const LdrPolicy& theta0);

struct EstimateInfo {
  LpStatus status = LpStatus::Error;
  double objective = 0.0;         // LP objective (cost + penalty term)
  double operational_cost = 0.0;  // same as policy.in_sample_cost
  double penalty_value = 0.0;     // lambda * sum w*|theta|
  double solve_seconds = 0.0;
  int nonzero_count = 0;          // non-intercept |theta| > kZeroTol
  double max_energy_residual = 0.0;
  double max_water_residual = 0.0;
};

// Solves the SAA estimation LP (lambda = 0) or its AdaLASSO-regularized
// version (lambda > 0, which requires weights). Throws LpFailure when the LP
// is infeasible, naming the binding constraints.
LdrPolicy estimate(const HydroSystem& system, const ScenarioSet& scenarios,
                   const BasisConfig& basis, double lambda,
                   const AdalassoWeights* weights = nullptr,
                   EstimateInfo* info = nullptr);

// Policy CSV with fixed header "t,h,k,l,r,theta" (17 significant digits) plus
// a <path>.meta.json sidecar carrying stats, basis, lambda and in-sample cost.
void save_policy(const LdrPolicy& policy, const std::string& path);
LdrPolicy load_policy(const std::string& path);

}  // namespace ldr
