#include "riskfront/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace riskfront {

namespace {

constexpr double kRowTol = 1e-9;
constexpr double kGridTol = 1e-12;

std::string at(int t, int x, int a) {
  std::ostringstream os;
  os << "(t=" << t << ", x=" << x << ", a=" << a << ")";
  return os.str();
}

}  // namespace

TabularMDP TabularMDP::make(int n_states, int n_actions, int horizon) {
  if (n_states < 1 || n_actions < 1 || horizon < 1) {
    throw std::invalid_argument("MDP sizes must be positive");
  }
  TabularMDP m;
  m.n_states = n_states;
  m.n_actions = n_actions;
  m.horizon = horizon;
  m.transitions.assign(1, std::vector<double>(static_cast<std::size_t>(n_states) * n_actions *
                                                  n_states,
                                              0.0));
  m.rewards.assign(1, std::vector<double>(static_cast<std::size_t>(n_states) * n_actions, 0.0));
  m.initial_dist.assign(n_states, 0.0);
  m.initial_dist[0] = 1.0;
  std::vector<int> all(n_actions);
  std::iota(all.begin(), all.end(), 0);
  m.allowed_actions.assign(1, std::vector<std::vector<int>>(n_states, all));
  return m;
}

void TabularMDP::split_transitions_by_time() {
  if (transitions.size() == 1) transitions.assign(horizon, transitions[0]);
}

void TabularMDP::split_rewards_by_time() {
  if (rewards.size() == 1) rewards.assign(horizon, rewards[0]);
}

void TabularMDP::split_actions_by_time() {
  if (allowed_actions.size() == 1) allowed_actions.assign(horizon, allowed_actions[0]);
}

std::pair<double, double> TabularMDP::reward_range(int t) const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int x = 0; x < n_states; ++x) {
    for (int a : actions(t, x)) {
      lo = std::min(lo, r(t, x, a));
      hi = std::max(hi, r(t, x, a));
    }
  }
  return {lo, hi};
}

std::vector<std::string> validate(const TabularMDP& m) {
  std::vector<std::string> errors;
  if (m.n_states < 1 || m.n_actions < 1 || m.horizon < 1) {
    errors.push_back("n_states, n_actions and horizon must be positive");
    return errors;
  }
  auto layers_ok = [&](std::size_t n, const char* what) {
    if (n == 1 || n == static_cast<std::size_t>(m.horizon)) return true;
    errors.push_back(std::string(what) + ": expected 1 or horizon layers, got " +
                     std::to_string(n));
    return false;
  };
  const auto S = static_cast<std::size_t>(m.n_states);
  const auto A = static_cast<std::size_t>(m.n_actions);
  bool shapes = layers_ok(m.transitions.size(), "transitions") &&
                layers_ok(m.rewards.size(), "rewards") &&
                layers_ok(m.allowed_actions.size(), "allowed_actions");
  if (shapes) {
    for (const auto& l : m.transitions) {
      if (l.size() != S * A * S) {
        errors.push_back("transitions: layer has wrong size");
        shapes = false;
      }
    }
    for (const auto& l : m.rewards) {
      if (l.size() != S * A) {
        errors.push_back("rewards: layer has wrong size");
        shapes = false;
      }
    }
    for (const auto& l : m.allowed_actions) {
      if (l.size() != S) {
        errors.push_back("allowed_actions: layer has wrong size");
        shapes = false;
      }
    }
  }
  if (m.initial_dist.size() != S) {
    errors.push_back("initial_dist has wrong size");
    shapes = false;
  }
  if (!shapes) return errors;

  double p1 = 0.0;
  for (double v : m.initial_dist) {
    if (!(v >= 0.0)) errors.push_back("initial_dist has a negative entry");
    p1 += v;
  }
  if (std::abs(p1 - 1.0) > kRowTol) {
    errors.push_back("initial_dist sums to " + std::to_string(p1));
  }
  if (m.reward_unit && !(*m.reward_unit > 0.0)) errors.push_back("reward_unit must be positive");

  for (int t = 0; t < m.horizon; ++t) {
    for (int x = 0; x < m.n_states; ++x) {
      const auto& acts = m.actions(t, x);
      if (acts.empty()) errors.push_back("no allowed action at (t=" + std::to_string(t) +
                                         ", x=" + std::to_string(x) + ")");
      if (!std::is_sorted(acts.begin(), acts.end()) ||
          std::adjacent_find(acts.begin(), acts.end()) != acts.end()) {
        errors.push_back("allowed actions not strictly ascending at (t=" + std::to_string(t) +
                         ", x=" + std::to_string(x) + ")");
      }
      for (int a : acts) {
        if (a < 0 || a >= m.n_actions) {
          errors.push_back("allowed action out of range " + at(t, x, a));
          continue;
        }
        double total = 0.0;
        bool negative = false;
        for (double v : m.row(t, x, a)) {
          negative |= !(v >= 0.0);
          total += v;
        }
        if (negative) errors.push_back("negative transition probability " + at(t, x, a));
        if (std::abs(total - 1.0) > kRowTol) {
          errors.push_back("transition row sums to " + std::to_string(total) + " " + at(t, x, a));
        }
        double rew = m.r(t, x, a);
        if (!std::isfinite(rew)) {
          errors.push_back("non-finite reward " + at(t, x, a));
        } else if (m.reward_unit && *m.reward_unit > 0.0) {
          double k = std::round(rew / *m.reward_unit);
          if (std::abs(rew - k * *m.reward_unit) > kGridTol) {
            errors.push_back("reward " + std::to_string(rew) + " off the reward_unit grid " +
                             at(t, x, a));
          }
        }
      }
    }
    // Stationary layers are identical for every t.
    if (m.transitions.size() == 1 && m.rewards.size() == 1 && m.allowed_actions.size() == 1) {
      break;
    }
  }
  return errors;
}

void require_valid(const TabularMDP& mdp) {
  auto errors = validate(mdp);
  if (errors.empty()) return;
  std::string msg = "invalid MDP: " + errors.front();
  if (errors.size() > 1) msg += " (+" + std::to_string(errors.size() - 1) + " more)";
  throw std::invalid_argument(msg);
}

void check_policy(const TabularMDP& mdp, const MarkovPolicy& pi) {
  if (pi.actions.size() != static_cast<std::size_t>(mdp.horizon)) {
    throw std::invalid_argument("policy length differs from the horizon");
  }
  for (int t = 0; t < mdp.horizon; ++t) {
    if (pi.actions[t].size() != static_cast<std::size_t>(mdp.n_states)) {
      throw std::invalid_argument("policy row has wrong size at t=" + std::to_string(t));
    }
    for (int x = 0; x < mdp.n_states; ++x) {
      const auto& acts = mdp.actions(t, x);
      if (!std::binary_search(acts.begin(), acts.end(), pi(t, x))) {
        throw std::invalid_argument("policy picks a disallowed action " + at(t, x, pi(t, x)));
      }
    }
  }
}

namespace {

ReturnDistribution backup(const TabularMDP& mdp, int t, int x, int a,
                          const std::vector<ReturnDistribution>& next,
                          const DistributionOptions& opts) {
  std::vector<double> w;
  std::vector<const ReturnDistribution*> comps;
  auto row = mdp.row(t, x, a);
  for (int xn = 0; xn < mdp.n_states; ++xn) {
    if (row[xn] > 0.0) {
      w.push_back(row[xn]);
      comps.push_back(&next[xn]);
    }
  }
  return shift(mixture(w, comps, opts), mdp.r(t, x, a));
}

}  // namespace

PolicyReturns policy_return_distributions(const TabularMDP& mdp, const MarkovPolicy& pi,
                                          const DistributionOptions& opts) {
  check_policy(mdp, pi);
  PolicyReturns out;
  out.nu.resize(mdp.horizon + 1);
  out.nu[mdp.horizon].assign(mdp.n_states, ReturnDistribution::dirac(0.0));
  for (int t = mdp.horizon - 1; t >= 0; --t) {
    out.nu[t].reserve(mdp.n_states);
    for (int x = 0; x < mdp.n_states; ++x) {
      out.nu[t].push_back(backup(mdp, t, x, pi(t, x), out.nu[t + 1], opts));
    }
  }
  out.initial = mixture(mdp.initial_dist, out.nu[0], opts);
  return out;
}

ReturnDistribution initial_return(const TabularMDP& mdp, const MarkovPolicy& pi,
                                  const DistributionOptions& opts) {
  check_policy(mdp, pi);
  const int H = mdp.horizon;
  std::vector<std::vector<char>> reach(H, std::vector<char>(mdp.n_states, 0));
  for (int x = 0; x < mdp.n_states; ++x) reach[0][x] = mdp.initial_dist[x] > 0.0;
  for (int t = 0; t + 1 < H; ++t) {
    for (int x = 0; x < mdp.n_states; ++x) {
      if (!reach[t][x]) continue;
      auto row = mdp.row(t, x, pi(t, x));
      for (int xn = 0; xn < mdp.n_states; ++xn) {
        if (row[xn] > 0.0) reach[t + 1][xn] = 1;
      }
    }
  }
  std::vector<ReturnDistribution> next(mdp.n_states, ReturnDistribution::dirac(0.0));
  std::vector<ReturnDistribution> cur(mdp.n_states);
  for (int t = H - 1; t >= 0; --t) {
    for (int x = 0; x < mdp.n_states; ++x) {
      if (reach[t][x]) cur[x] = backup(mdp, t, x, pi(t, x), next, opts);
    }
    std::swap(cur, next);
  }
  return mixture(mdp.initial_dist, next, opts);
}

int sample_index(std::span<const double> probs, double u) {
  double acc = 0.0;
  int last = -1;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    acc += probs[i];
    last = static_cast<int>(i);
    if (u < acc) return last;
  }
  return last;
}

ReturnDistribution monte_carlo_return(const TabularMDP& mdp, const MarkovPolicy& pi,
                                      int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("monte_carlo_return: n_samples must be >= 1");
  check_policy(mdp, pi);
  UniformStream rng(seed);
  std::vector<double> returns;
  returns.reserve(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    int x = sample_index(mdp.initial_dist, rng.next());
    double ret = 0.0;
    for (int t = 0; t < mdp.horizon; ++t) {
      int a = pi(t, x);
      ret += mdp.r(t, x, a);
      x = sample_index(mdp.row(t, x, a), rng.next());
    }
    returns.push_back(ret);
  }
  // Weights come from counts so repeated outcomes get exact frequencies.
  std::sort(returns.begin(), returns.end());
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < returns.size();) {
    std::size_t j = i;
    while (j < returns.size() && returns[j] == returns[i]) ++j;
    atoms.push_back({returns[i], static_cast<double>(j - i) / n_samples});
    i = j;
  }
  return ReturnDistribution::from_atoms(std::move(atoms));
}

}  // namespace riskfront
