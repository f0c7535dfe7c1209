#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "riskfront/mdp.hpp"
#include "riskfront/risk.hpp"

namespace riskfront {

struct GridProxyResult {
  MarkovPolicy policy;
  /// Best grid objective: Chernoff bound for grid_proxy_tp, EVaR lower bound for grid_proxy_evar.
  double value = 0.0;
  double beta = 0.0;
  int grid_points = 0;
};

/// Number of points of the Chernoff grid over [beta_min, 0) with spacing 2 log(1+eps) / H.
int tp_grid_size(int horizon, double eps, double beta_min);

/// Minimizes the Chernoff bound on P(R <= t) over the optimal policies of a beta grid.
GridProxyResult grid_proxy_tp(const TabularMDP& mdp, double eps, double beta_min, double t);

/// Maximizes entrm(R, beta) - log(alpha) / beta over the optimal policies of a
/// geometric grid of n_points values in [beta_min, -1e-6].
GridProxyResult grid_proxy_evar(const TabularMDP& mdp, int n_points, double beta_min,
                                double alpha);

struct NestedResult {
  MarkovPolicy policy;
  /// Nested objective at the root, mixed over p1. For ThresholdProb this is the
  /// (negated) recursive probability score and carries no static meaning.
  double root_value = 0.0;
};

/// Backward induction applying spec to the one-step law of r + V(X'). Supported:
/// Mean, EntRM, VaR, CVaR and ThresholdProb (scored as -P(Z <= T) with the global T).
NestedResult nested_risk_vi(const TabularMDP& mdp, const RiskSpec& spec);

struct AugmentedTpResult {
  double optimal_prob = 0.0;
  /// action[t] maps (state, accumulated reward in reward units) to the greedy action.
  std::vector<std::map<std::pair<int, long long>, int>> action;
  std::size_t n_augmented_states = 0;
};

/// Exact minimum of P(R <= t) over history-dependent policies, by dynamic
/// programming over (state, accumulated reward). Requires mdp.reward_unit.
AugmentedTpResult augmented_tp_dp(const TabularMDP& mdp, double t,
                                  std::size_t max_states = 20'000'000);

struct RiskNeutralResult {
  MarkovPolicy policy;
  double mean_value = 0.0;
};

RiskNeutralResult risk_neutral(const TabularMDP& mdp);

}  // namespace riskfront
