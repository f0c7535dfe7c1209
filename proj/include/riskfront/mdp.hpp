#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "riskfront/distribution.hpp"

namespace riskfront {

/// Finite-horizon tabular MDP with deterministic rewards r(t, x, a).
///
/// Timesteps are 0-based, t in [0, horizon). Transitions, rewards and action
/// masks are each stored either as a single stationary layer or as one layer
/// per timestep.
struct TabularMDP {
  int n_states = 0;
  int n_actions = 0;
  int horizon = 0;
  /// [layer] -> flat [x][a][x'].
  std::vector<std::vector<double>> transitions;
  /// [layer] -> flat [x][a].
  std::vector<std::vector<double>> rewards;
  std::vector<double> initial_dist;
  /// [layer][x] -> ascending list of allowed actions.
  std::vector<std::vector<std::vector<int>>> allowed_actions;
  /// Common grid step of all rewards, when there is one.
  std::optional<double> reward_unit;

  /// Stationary, zero-filled model with every action allowed and p1 = delta_0.
  static TabularMDP make(int n_states, int n_actions, int horizon);

  double p(int t, int x, int a, int xn) const {
    return transitions[layer(transitions.size(), t)][index3(x, a, xn)];
  }
  double& p(int t, int x, int a, int xn) {
    return transitions[layer(transitions.size(), t)][index3(x, a, xn)];
  }
  /// Row p(. | x, a) at timestep t.
  std::span<const double> row(int t, int x, int a) const {
    return {transitions[layer(transitions.size(), t)].data() + index3(x, a, 0),
            static_cast<std::size_t>(n_states)};
  }
  double r(int t, int x, int a) const {
    return rewards[layer(rewards.size(), t)][index2(x, a)];
  }
  double& r(int t, int x, int a) { return rewards[layer(rewards.size(), t)][index2(x, a)]; }
  const std::vector<int>& actions(int t, int x) const {
    return allowed_actions[layer(allowed_actions.size(), t)][x];
  }

  /// Expand a stationary layer into one copy per timestep so that it can be overridden.
  void split_transitions_by_time();
  void split_rewards_by_time();
  void split_actions_by_time();

  /// Smallest and largest reward over all allowed (x, a) at timestep t.
  std::pair<double, double> reward_range(int t) const;

 private:
  std::size_t layer(std::size_t n_layers, int t) const {
    return n_layers == 1 ? 0 : static_cast<std::size_t>(t);
  }
  std::size_t index3(int x, int a, int xn) const {
    return (static_cast<std::size_t>(x) * n_actions + a) * n_states + xn;
  }
  std::size_t index2(int x, int a) const { return static_cast<std::size_t>(x) * n_actions + a; }
};

/// Every violated model invariant, one message per violation. Empty when valid.
std::vector<std::string> validate(const TabularMDP& mdp);

/// Throws std::invalid_argument carrying the first violations when mdp is invalid.
void require_valid(const TabularMDP& mdp);

/// Deterministic Markov policy, actions[t][x].
struct MarkovPolicy {
  std::vector<std::vector<int>> actions;

  int operator()(int t, int x) const { return actions[t][x]; }
  friend bool operator==(const MarkovPolicy&, const MarkovPolicy&) = default;
};

/// Throws std::invalid_argument when the policy has the wrong shape or picks a masked action.
void check_policy(const TabularMDP& mdp, const MarkovPolicy& pi);

struct PolicyReturns {
  /// nu[t][x] is the return from state x at timestep t; nu[horizon][x] = delta_0.
  std::vector<std::vector<ReturnDistribution>> nu;
  /// p1-mixture of nu[0].
  ReturnDistribution initial;
};

/// Exact return distributions of pi from every (t, x).
PolicyReturns policy_return_distributions(const TabularMDP& mdp, const MarkovPolicy& pi,
                                          const DistributionOptions& opts = {});

/// Return distribution of pi from p1, evaluating only the reachable states.
ReturnDistribution initial_return(const TabularMDP& mdp, const MarkovPolicy& pi,
                                  const DistributionOptions& opts = {});

/// Empirical return distribution of n_samples seeded rollouts.
ReturnDistribution monte_carlo_return(const TabularMDP& mdp, const MarkovPolicy& pi,
                                      int n_samples, std::uint64_t seed);

/// Uniform [0,1) stream. std::mt19937_64 is fully specified by the standard,
/// unlike the std distributions, so draws are identical across platforms.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

/// Index drawn from a discrete law given as probabilities.
int sample_index(std::span<const double> probs, double u);

}  // namespace riskfront
