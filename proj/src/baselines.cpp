#include "riskfront/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "riskfront/entrm_planning.hpp"

namespace riskfront {

int tp_grid_size(int horizon, double eps, double beta_min) {
  return static_cast<int>(std::ceil(std::abs(beta_min) * horizon / (2.0 * std::log1p(eps))));
}

GridProxyResult grid_proxy_tp(const TabularMDP& mdp, double eps, double beta_min, double t) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("grid_proxy_tp: eps outside (0,1)");
  if (!(beta_min < 0.0)) throw std::invalid_argument("grid_proxy_tp: beta_min must be negative");
  const double spacing = 2.0 * std::log1p(eps) / mdp.horizon;
  const int n = tp_grid_size(mdp.horizon, eps, beta_min);
  GridProxyResult best;
  best.value = INFINITY;
  best.grid_points = n;
  for (int k = 1; k <= n; ++k) {
    const double beta = std::max(-spacing * k, beta_min);
    EntrmSolution sol = entrm_value_iteration(mdp, beta);
    // The optimal entropic value gives the policy's Chernoff bound directly.
    const double bound = std::exp(beta * (initial_value(mdp, sol) - t));
    if (bound < best.value) {
      best.value = bound;
      best.beta = beta;
      best.policy = std::move(sol.policy);
    }
  }
  return best;
}

GridProxyResult grid_proxy_evar(const TabularMDP& mdp, int n_points, double beta_min,
                                double alpha) {
  if (n_points < 1) throw std::invalid_argument("grid_proxy_evar: n_points must be >= 1");
  if (!(beta_min < 0.0)) throw std::invalid_argument("grid_proxy_evar: beta_min must be negative");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("grid_proxy_evar: alpha outside (0,1)");
  const double log_hi = std::log(1e-6);
  const double log_lo = std::log(std::max(-beta_min, 1e-6));
  const double log_alpha = std::log(alpha);
  GridProxyResult best;
  best.value = -INFINITY;
  best.grid_points = n_points;
  for (int k = 0; k < n_points; ++k) {
    const double frac = n_points == 1 ? 1.0 : static_cast<double>(k) / (n_points - 1);
    const double beta = -std::exp(log_hi + frac * (log_lo - log_hi));
    EntrmSolution sol = entrm_value_iteration(mdp, beta);
    const double score = initial_value(mdp, sol) - log_alpha / beta;
    if (score > best.value) {
      best.value = score;
      best.beta = beta;
      best.policy = std::move(sol.policy);
    }
  }
  return best;
}

NestedResult nested_risk_vi(const TabularMDP& mdp, const RiskSpec& spec) {
  if (spec.kind == RiskKind::EVaR) throw std::invalid_argument("nested_risk_vi: EVaR is not supported");
  auto score = [&](const ReturnDistribution& z) {
    if (spec.kind == RiskKind::ThresholdProb) return -threshold_prob(z, spec.param);
    return evaluate(z, spec);
  };
  auto one_step = [&](std::span<const double> probs, std::span<const double> values, double r) {
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (probs[i] > 0.0) atoms.push_back({r + values[i], probs[i]});
    }
    return ReturnDistribution::from_atoms(std::move(atoms));
  };

  const int H = mdp.horizon;
  const int S = mdp.n_states;
  NestedResult out;
  out.policy.actions.assign(H, std::vector<int>(S, 0));
  std::vector<double> next(S, 0.0);
  std::vector<double> cur(S, 0.0);
  for (int t = H - 1; t >= 0; --t) {
    for (int x = 0; x < S; ++x) {
      double best = -INFINITY;
      int best_a = -1;
      for (int a : mdp.actions(t, x)) {
        double v = score(one_step(mdp.row(t, x, a), next, mdp.r(t, x, a)));
        if (best_a < 0 || v > best) {
          best = v;
          best_a = a;
        }
      }
      cur[x] = best;
      out.policy.actions[t][x] = best_a;
    }
    std::swap(cur, next);
  }
  out.root_value = score(one_step(mdp.initial_dist, next, 0.0));
  return out;
}

AugmentedTpResult augmented_tp_dp(const TabularMDP& mdp, double t, std::size_t max_states) {
  if (!mdp.reward_unit) throw std::invalid_argument("augmented_tp_dp: the MDP has no reward_unit");
  const double unit = *mdp.reward_unit;
  const int H = mdp.horizon;
  const int S = mdp.n_states;
  using Key = std::pair<int, long long>;
  auto units = [&](int step, int x, int a) { return std::llround(mdp.r(step, x, a) / unit); };

  // Forward pass: reachable (state, accumulated units) per timestep, under any action.
  std::vector<std::vector<Key>> layers(H + 1);
  for (int x = 0; x < S; ++x) {
    if (mdp.initial_dist[x] > 0.0) layers[0].push_back({x, 0});
  }
  std::size_t total = layers[0].size();
  for (int step = 0; step < H; ++step) {
    std::vector<Key>& next = layers[step + 1];
    for (const auto& [x, c] : layers[step]) {
      for (int a : mdp.actions(step, x)) {
        const long long c2 = c + units(step, x, a);
        auto row = mdp.row(step, x, a);
        for (int xn = 0; xn < S; ++xn) {
          if (row[xn] > 0.0) next.push_back({xn, c2});
        }
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    total += next.size();
    if (total > max_states) {
      throw std::runtime_error("augmented_tp_dp: more than " + std::to_string(max_states) +
                               " augmented states");
    }
  }

  const auto limit = static_cast<long long>(std::floor(t / unit + 1e-9));
  AugmentedTpResult out;
  out.n_augmented_states = total;
  out.action.resize(H);
  std::vector<double> v_next(layers[H].size());
  for (std::size_t i = 0; i < layers[H].size(); ++i) v_next[i] = layers[H][i].second <= limit;
  for (int step = H - 1; step >= 0; --step) {
    const std::vector<Key>& keys = layers[step];
    const std::vector<Key>& next_keys = layers[step + 1];
    auto lookup = [&](int xn, long long c) {
      auto it = std::lower_bound(next_keys.begin(), next_keys.end(), Key{xn, c});
      return v_next[static_cast<std::size_t>(it - next_keys.begin())];
    };
    std::vector<double> v(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) {
      const auto [x, c] = keys[i];
      double best = INFINITY;
      int best_a = -1;
      for (int a : mdp.actions(step, x)) {
        const long long c2 = c + units(step, x, a);
        auto row = mdp.row(step, x, a);
        double val = 0.0;
        for (int xn = 0; xn < S; ++xn) {
          if (row[xn] > 0.0) val += row[xn] * lookup(xn, c2);
        }
        if (best_a < 0 || val < best) {
          best = val;
          best_a = a;
        }
      }
      v[i] = best;
      out.action[step][keys[i]] = best_a;
    }
    v_next = std::move(v);
  }
  for (std::size_t i = 0; i < layers[0].size(); ++i) {
    out.optimal_prob += mdp.initial_dist[layers[0][i].first] * v_next[i];
  }
  return out;
}

RiskNeutralResult risk_neutral(const TabularMDP& mdp) {
  EntrmSolution sol = entrm_value_iteration(mdp, 0.0);
  return {std::move(sol.policy), initial_value(mdp, sol)};
}

}  // namespace riskfront
