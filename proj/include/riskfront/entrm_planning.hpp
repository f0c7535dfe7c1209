#pragma once

#include <limits>
#include <vector>

#include "riskfront/mdp.hpp"

namespace riskfront {

inline constexpr double kTieTol = 1e-10;

struct EntrmSolution {
  double beta = 0.0;
  MarkovPolicy policy;
  /// q[t][x][a]; masked actions hold -infinity.
  std::vector<std::vector<std::vector<double>>> q;
  /// v[t][x] for t in [0, horizon]; v[horizon] = 0.
  std::vector<std::vector<double>> v;
};

/// Exact backward induction for the entropic risk at beta. Ties go to the lowest action index.
EntrmSolution entrm_value_iteration(const TabularMDP& mdp, double beta);

/// Optimal entropic value of the return from p1, combining v[0] through the initial law.
double initial_value(const TabularMDP& mdp, const EntrmSolution& sol);

/// entrm of the discrete law putting mass probs[i] on values[i] (zero-mass entries ignored).
double entrm_of_values(std::span<const double> probs, std::span<const double> values, double beta);

struct AdvantageViolation {
  int t;
  int x;
  int a;
  double value;
};

struct AdvantageTable {
  /// a[t][x][a]; masked actions hold +infinity.
  std::vector<std::vector<std::vector<double>>> a;
  /// Entries below -1e-9, meaning pi is not greedy with respect to itself there.
  std::vector<AdvantageViolation> violations;
};

/// Loss of entropic value at (t, x) from playing a once and following pi afterwards.
AdvantageTable generalized_advantage(const TabularMDP& mdp, const MarkovPolicy& pi, double beta);

struct StabilityRadius {
  /// Half-width of a beta interval around beta on which pi stays optimal.
  double radius = 0.0;
  /// No state has a second allowed action; the radius is infinite.
  bool unbounded = false;
  /// Some non-greedy action is tied with the greedy one within tie_tol; radius is 0.
  bool degenerate = false;
};

/// Certified radius for a policy that is optimal at beta. For every beta' with
/// |beta' - beta| <= radius, pi remains optimal at beta'.
StabilityRadius stability_radius(const TabularMDP& mdp, const MarkovPolicy& pi, double beta,
                                 double tie_tol = kTieTol);

}  // namespace riskfront
