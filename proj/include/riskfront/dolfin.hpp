#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "riskfront/distribution.hpp"
#include "riskfront/findbreaks.hpp"
#include "riskfront/mdp.hpp"

namespace riskfront {

struct Interval {
  double lo;
  double hi;
  double mid() const { return 0.5 * (lo + hi); }
};

struct FrontEntry {
  MarkovPolicy policy;
  double beta_lo;
  double beta_hi;
  ReturnDistribution initial_return;
};

/// Policies that are optimal for the entropic risk, each on its own interval of
/// beta. Entries are ordered by ascending beta and tile [beta_min, 0].
struct OptimalityFront {
  std::vector<FrontEntry> entries;
  double beta_min = -10.0;
  double epsilon = 1e-2;
  long total_eval_count = 0;
  /// Interior boundaries between entries.
  std::vector<double> breakpoints;
  /// [t]: merged breakpoints of every state's policy at timesteps >= t.
  std::vector<std::vector<double>> breakpoints_by_step;

  /// Entry whose interval contains beta; the left one on a shared boundary.
  const FrontEntry& at(double beta) const;
};

struct DolfinOptions {
  FindBreaksOptions find;
  DistributionOptions dist;
  /// Adjacent entries closer than this in sup-CDF distance are merged.
  double dedupe_tol = 1e-12;
};

OptimalityFront dolfin(const TabularMDP& mdp, double epsilon, double beta_min = -10.0,
                       const DolfinOptions& opts = {});

/// Sorted union of the breakpoint sets and previous, with every run of points
/// spanning less than epsilon replaced by its mean. Points outside (beta_min, 0) are dropped.
std::vector<double> merge_breakpoints(std::span<const std::vector<double>> sets,
                                      std::span<const double> previous, double epsilon,
                                      double beta_min);

/// Intervals of [beta_min, 0] cut at merge_breakpoints(sets, previous, epsilon, beta_min).
std::vector<Interval> refine_partition(std::span<const std::vector<double>> sets,
                                       std::span<const double> previous, double epsilon,
                                       double beta_min);

/// Lower bound on the beta at which the entropic values of two distributions on a
/// common evenly spaced grid can cross. nullopt when the lowest-grid-point mass
/// difference vanishes. Throws std::invalid_argument for identical inputs or
/// supports that do not sit on one even grid.
std::optional<double> cauchy_beta_bound(const ReturnDistribution& ref,
                                        const ReturnDistribution& other);

struct SwitchReport {
  /// For each breakpoint, the number of (t, x) pairs whose action changes across it.
  std::vector<int> changes;
  /// changes value -> number of breakpoints with that many changes.
  std::map<int, int> histogram;
};

SwitchReport diagnose_single_switch(const OptimalityFront& front, const TabularMDP& mdp);

}  // namespace riskfront
