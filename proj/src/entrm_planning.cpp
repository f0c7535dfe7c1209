#include "riskfront/entrm_planning.hpp"

#include <algorithm>
#include <cmath>

#include "riskfront/risk.hpp"

namespace riskfront {

double entrm_of_values(std::span<const double> probs, std::span<const double> values,
                       double beta) {
  if (std::abs(beta) < kZeroBeta) {
    double m = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (probs[i] > 0.0) m += probs[i] * values[i];
    }
    return m;
  }
  double m = beta < 0.0 ? INFINITY : -INFINITY;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) m = beta < 0.0 ? std::min(m, values[i]) : std::max(m, values[i]);
  }
  double sum = 0.0;
  double sum_m1 = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    double y = beta * (values[i] - m);
    sum += probs[i] * std::exp(y);
    sum_m1 += probs[i] * std::expm1(y);
  }
  double log_mgf = sum > 0.5 ? std::log1p(sum_m1) : std::log(sum);
  return m + log_mgf / beta;
}

EntrmSolution entrm_value_iteration(const TabularMDP& mdp, double beta) {
  const int H = mdp.horizon;
  const int S = mdp.n_states;
  EntrmSolution sol;
  sol.beta = beta;
  sol.policy.actions.assign(H, std::vector<int>(S, 0));
  sol.q.assign(H, std::vector<std::vector<double>>(S, std::vector<double>(mdp.n_actions, -INFINITY)));
  sol.v.assign(H + 1, std::vector<double>(S, 0.0));
  for (int t = H - 1; t >= 0; --t) {
    for (int x = 0; x < S; ++x) {
      double best = -INFINITY;
      int best_a = -1;
      for (int a : mdp.actions(t, x)) {
        double q = mdp.r(t, x, a) + entrm_of_values(mdp.row(t, x, a), sol.v[t + 1], beta);
        sol.q[t][x][a] = q;
        if (best_a < 0 || q > best) {
          best = q;
          best_a = a;
        }
      }
      sol.v[t][x] = best;
      sol.policy.actions[t][x] = best_a;
    }
  }
  return sol;
}

double initial_value(const TabularMDP& mdp, const EntrmSolution& sol) {
  return entrm_of_values(mdp.initial_dist, sol.v[0], sol.beta);
}

namespace {

ReturnDistribution action_return(const TabularMDP& mdp, int t, int x, int a,
                                 const std::vector<ReturnDistribution>& next) {
  std::vector<double> w;
  std::vector<const ReturnDistribution*> comps;
  auto row = mdp.row(t, x, a);
  for (int xn = 0; xn < mdp.n_states; ++xn) {
    if (row[xn] > 0.0) {
      w.push_back(row[xn]);
      comps.push_back(&next[xn]);
    }
  }
  return shift(mixture(w, comps), mdp.r(t, x, a));
}

}  // namespace

AdvantageTable generalized_advantage(const TabularMDP& mdp, const MarkovPolicy& pi, double beta) {
  PolicyReturns ret = policy_return_distributions(mdp, pi);
  AdvantageTable out;
  out.a.assign(mdp.horizon, std::vector<std::vector<double>>(
                                mdp.n_states, std::vector<double>(mdp.n_actions, INFINITY)));
  for (int t = 0; t < mdp.horizon; ++t) {
    for (int x = 0; x < mdp.n_states; ++x) {
      const double own = entrm(ret.nu[t][x], beta);
      for (int a : mdp.actions(t, x)) {
        double adv = 0.0;
        if (a != pi(t, x)) adv = own - entrm(action_return(mdp, t, x, a, ret.nu[t + 1]), beta);
        out.a[t][x][a] = adv;
        if (adv < -1e-9) out.violations.push_back({t, x, a, adv});
      }
    }
  }
  return out;
}

// Per (t, x), the entropic values of the actions' returns are compared through
// bounds that only depend on the common support range [lo, hi] of those returns:
// moving beta by eps shifts each value by at most eps * (value - lo) / |beta| in
// the unfavourable direction (eps * (hi - lo)^2 / 8 around zero, by Hoeffding),
// so a gap of A survives any |eps| <= |beta| A / (hi - lo), resp. 8 A / (hi - lo)^2.
StabilityRadius stability_radius(const TabularMDP& mdp, const MarkovPolicy& pi, double beta,
                                 double tie_tol) {
  PolicyReturns ret = policy_return_distributions(mdp, pi);
  StabilityRadius out;
  out.radius = INFINITY;
  out.unbounded = true;
  const bool at_zero = std::abs(beta) < kZeroBeta;
  for (int t = 0; t < mdp.horizon; ++t) {
    for (int x = 0; x < mdp.n_states; ++x) {
      const auto& acts = mdp.actions(t, x);
      if (acts.size() < 2) continue;
      out.unbounded = false;
      const ReturnDistribution& own = ret.nu[t][x];
      const double u_own = entrm(own, beta);
      double lo = own.min_support();
      double hi = own.max_support();
      double gap = INFINITY;
      for (int a : acts) {
        if (a == pi(t, x)) continue;
        ReturnDistribution d = action_return(mdp, t, x, a, ret.nu[t + 1]);
        lo = std::min(lo, d.min_support());
        hi = std::max(hi, d.max_support());
        gap = std::min(gap, u_own - entrm(d, beta));
      }
      if (gap <= tie_tol) {
        return {0.0, false, true};
      }
      const double range = hi - lo;
      double local = at_zero ? 8.0 * gap / (range * range) : std::abs(beta) * gap / range;
      out.radius = std::min(out.radius, local);
    }
  }
  return out;
}

}  // namespace riskfront
