#pragma once

#include <span>
#include <vector>

#include "riskfront/distribution.hpp"

namespace riskfront {

enum class SweepDirection { Down, Up };

struct JumpStep {
  double step = 0.0;
  /// Only one action: the argmax can never change.
  bool unbounded = false;
};

/// Step in the sweep direction over which the current argmax provably stays
/// optimal, floored at min_step. values are the entropic values of the actions
/// at beta; [r_min, r_max] bounds every action's support.
JumpStep action_jump(double beta, std::span<const double> values, double r_min, double r_max,
                     SweepDirection dir, double min_step, double tie_tol = 1e-10);

struct Segment {
  double lo;
  double hi;
  int action;
};

struct LocalFront {
  /// Tile the queried interval in ascending order; neighbours carry different actions.
  std::vector<Segment> segments;
  /// Interior segment boundaries.
  std::vector<double> breakpoints;
  /// Number of beta values at which every action was evaluated.
  int eval_count = 0;
};

struct FindBreaksOptions {
  /// Extra bisection steps per breakpoint after it has been bracketed to epsilon.
  int refine_iters = 0;
  double tie_tol = 1e-10;
};

/// Optimal action of each beta in [lo, hi] for a single decision between the given
/// return distributions, with breakpoints located to within epsilon.
LocalFront find_breaks(std::span<const ReturnDistribution> dists, double lo, double hi,
                       double epsilon, const FindBreaksOptions& opts = {});

/// Same, taking the candidates by pointer.
LocalFront find_breaks(std::span<const ReturnDistribution* const> dists, double lo, double hi,
                       double epsilon, const FindBreaksOptions& opts = {});

}  // namespace riskfront
