#pragma once

#include <cstdint>
#include <vector>

#include "riskfront/distribution.hpp"
#include "riskfront/mdp.hpp"

namespace riskfront {

struct InventoryParams {
  int capacity = 10;
  int horizon = 10;
  double demand_p = 0.5;
  double sale_mult = 4.0;
  double maint_coef = 1.0;
  double fixed_cost = 3.0;
  double var_cost = 2.0;
  /// Charge the fixed cost only when something is ordered.
  bool fixed_cost_only_if_ordering = true;
  /// Allow any order and discard stock above capacity, instead of masking orders that overflow.
  bool clip_overflow = false;
};

/// Single-product store with Binomial(capacity, demand_p) demand and rewards
/// scaled by 1 / (4 capacity).
///
/// Each period takes two MDP steps. At a stock state x the order a pays
/// -(maint_coef x + ordering cost) and the demand moves the store to an outcome
/// state (x', sold). The outcome state has a single action paying sale_mult * sold
/// and leads back to stock state x'. States 0..capacity are stock levels, the
/// remaining ones outcomes; the horizon is 2 * params.horizon.
TabularMDP inventory_mdp(const InventoryParams& params = {});

/// Index of the outcome state (stock left, units sold) in inventory_mdp.
int inventory_outcome_state(int capacity, int stock_left, int sold);

struct CliffParams {
  int width = 12;
  int height = 4;
  double slip = 0.1;
  int horizon = 15;
  double cliff_penalty = -0.5;
};

/// Cliff walk. Cells are row-major from the top-left; the start is the bottom-left
/// cell, the goal the bottom-right one, and the bottom cells in between are cliff.
/// Actions are up, down, left, right; with probability slip the move goes in one of
/// the other three directions instead, and moves off the grid stay put. A walker
/// standing on a cliff cell receives cliff_penalty, one standing on the goal after
/// h moves receives 1 - h / (2 horizon); both then drop into an absorbing state
/// (the last index). The MDP horizon is horizon + 1 so that the final move is paid.
TabularMDP cliff_mdp(const CliffParams& params = {});

enum CliffAction { kUp = 0, kDown = 1, kLeft = 2, kRight = 3 };

/// Rewards uniform on [0, 1], transition rows and p1 uniform on the simplex.
TabularMDP random_mdp(int n_states, int n_actions, int horizon, std::uint64_t seed);

/// Distributions on n_atoms evenly spaced points of [0, 1] with simplex-uniform weights.
std::vector<ReturnDistribution> random_simplex_problem(int n_actions, int n_atoms,
                                                       std::uint64_t seed);

/// Point of the probability simplex of dimension n, uniformly distributed.
std::vector<double> sample_simplex(int n, UniformStream& rng);

}  // namespace riskfront
