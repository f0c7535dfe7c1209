#include "riskfront/envs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace riskfront {

namespace {

std::vector<double> binomial_pmf(int n, double p) {
  std::vector<double> pmf(n + 1);
  for (int k = 0; k <= n; ++k) {
    double log_c = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    double log_p = (k > 0 ? k * std::log(p) : 0.0) + (n - k > 0 ? (n - k) * std::log1p(-p) : 0.0);
    pmf[k] = std::exp(log_c + log_p);
  }
  double total = 0.0;
  for (double v : pmf) total += v;
  for (double& v : pmf) v /= total;
  return pmf;
}

bool on_grid(const TabularMDP& m, double unit) {
  for (const auto& layer : m.rewards) {
    for (double r : layer) {
      if (std::abs(r - std::round(r / unit) * unit) > 1e-12) return false;
    }
  }
  return true;
}

}  // namespace

int inventory_outcome_state(int capacity, int stock_left, int sold) {
  // Outcomes with stock_left + sold = y are numbered consecutively by y.
  const int y = stock_left + sold;
  return capacity + 1 + y * (y + 1) / 2 + sold;
}

TabularMDP inventory_mdp(const InventoryParams& p) {
  const int M = p.capacity;
  if (M < 1 || p.horizon < 1) throw std::invalid_argument("inventory: capacity and horizon must be positive");
  if (!(p.demand_p >= 0.0 && p.demand_p <= 1.0)) throw std::invalid_argument("inventory: demand_p outside [0,1]");
  const int n_outcomes = (M + 1) * (M + 2) / 2;
  TabularMDP m = TabularMDP::make(M + 1 + n_outcomes, M + 1, 2 * p.horizon);
  const double scale = 1.0 / (4.0 * M);
  const std::vector<double> demand = binomial_pmf(M, p.demand_p);

  for (int x = 0; x <= M; ++x) {
    auto& acts = m.allowed_actions[0][x];
    acts.clear();
    const int max_order = p.clip_overflow ? M : M - x;
    for (int a = 0; a <= max_order; ++a) {
      acts.push_back(a);
      const int y = std::min(x + a, M);
      const bool fixed = a > 0 || !p.fixed_cost_only_if_ordering;
      const double order_cost = (fixed ? p.fixed_cost : 0.0) + p.var_cost * a;
      m.r(0, x, a) = -(p.maint_coef * x + order_cost) * scale;
      for (int d = 0; d <= M; ++d) {
        const int sold = std::min(d, y);
        m.p(0, x, a, inventory_outcome_state(M, y - sold, sold)) += demand[d];
      }
    }
  }
  for (int y = 0; y <= M; ++y) {
    for (int sold = 0; sold <= y; ++sold) {
      const int s = inventory_outcome_state(M, y - sold, sold);
      m.allowed_actions[0][s] = {0};
      m.r(0, s, 0) = p.sale_mult * sold * scale;
      m.p(0, s, 0, y - sold) = 1.0;
    }
  }
  m.initial_dist.assign(m.n_states, 0.0);
  m.initial_dist[0] = 1.0;
  if (on_grid(m, scale)) m.reward_unit = scale;
  return m;
}

TabularMDP cliff_mdp(const CliffParams& p) {
  if (p.width < 3 || p.height < 2) throw std::invalid_argument("cliff: need width >= 3 and height >= 2");
  if (p.horizon < 1) throw std::invalid_argument("cliff: horizon must be positive");
  if (!(p.slip >= 0.0 && p.slip <= 1.0)) throw std::invalid_argument("cliff: slip outside [0,1]");
  const int W = p.width;
  const int R = p.height;
  const int absorbing = W * R;
  TabularMDP m = TabularMDP::make(W * R + 1, 4, p.horizon + 1);
  auto cell = [&](int row, int col) { return row * W + col; };
  const int start = cell(R - 1, 0);
  const int goal = cell(R - 1, W - 1);
  auto is_cliff = [&](int s) { return s > start && s < goal; };

  auto move = [&](int s, int dir) {
    int row = s / W;
    int col = s % W;
    switch (dir) {
      case kUp: row = std::max(row - 1, 0); break;
      case kDown: row = std::min(row + 1, R - 1); break;
      case kLeft: col = std::max(col - 1, 0); break;
      default: col = std::min(col + 1, W - 1); break;
    }
    return cell(row, col);
  };

  for (int s = 0; s < W * R; ++s) {
    if (s == goal || is_cliff(s)) {
      m.allowed_actions[0][s] = {0};
      m.p(0, s, 0, absorbing) = 1.0;
      continue;
    }
    for (int a = 0; a < 4; ++a) {
      for (int dir = 0; dir < 4; ++dir) {
        double pr = dir == a ? 1.0 - p.slip : p.slip / 3.0;
        if (pr > 0.0) m.p(0, s, a, move(s, dir)) += pr;
      }
    }
  }
  m.allowed_actions[0][absorbing] = {0};
  m.p(0, absorbing, 0, absorbing) = 1.0;

  m.split_rewards_by_time();
  for (int t = 0; t < m.horizon; ++t) {
    for (int s = start + 1; s < goal; ++s) m.r(t, s, 0) = p.cliff_penalty;
    m.r(t, goal, 0) = 1.0 - static_cast<double>(t) / (2.0 * p.horizon);
  }
  m.initial_dist.assign(m.n_states, 0.0);
  m.initial_dist[start] = 1.0;
  const double unit = 1.0 / (2.0 * p.horizon);
  if (on_grid(m, unit)) m.reward_unit = unit;
  return m;
}

std::vector<double> sample_simplex(int n, UniformStream& rng) {
  std::vector<double> cuts(n - 1);
  for (double& c : cuts) c = rng.next();
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> w(n);
  double prev = 0.0;
  for (int i = 0; i < n - 1; ++i) {
    w[i] = cuts[i] - prev;
    prev = cuts[i];
  }
  w[n - 1] = 1.0 - prev;
  return w;
}

TabularMDP random_mdp(int n_states, int n_actions, int horizon, std::uint64_t seed) {
  TabularMDP m = TabularMDP::make(n_states, n_actions, horizon);
  UniformStream rng(seed);
  for (int x = 0; x < n_states; ++x) {
    for (int a = 0; a < n_actions; ++a) m.r(0, x, a) = rng.next();
  }
  for (int x = 0; x < n_states; ++x) {
    for (int a = 0; a < n_actions; ++a) {
      std::vector<double> row = sample_simplex(n_states, rng);
      for (int xn = 0; xn < n_states; ++xn) m.p(0, x, a, xn) = row[xn];
    }
  }
  m.initial_dist = sample_simplex(n_states, rng);
  return m;
}

std::vector<ReturnDistribution> random_simplex_problem(int n_actions, int n_atoms,
                                                       std::uint64_t seed) {
  if (n_actions < 1 || n_atoms < 1) throw std::invalid_argument("random_simplex_problem: sizes must be positive");
  UniformStream rng(seed);
  std::vector<ReturnDistribution> out;
  out.reserve(n_actions);
  for (int a = 0; a < n_actions; ++a) {
    std::vector<double> w = sample_simplex(n_atoms, rng);
    std::vector<Atom> atoms;
    for (int i = 0; i < n_atoms; ++i) {
      double x = n_atoms == 1 ? 0.0 : static_cast<double>(i) / (n_atoms - 1);
      atoms.push_back({x, w[i]});
    }
    out.push_back(ReturnDistribution::from_atoms(std::move(atoms)));
  }
  return out;
}

}  // namespace riskfront
