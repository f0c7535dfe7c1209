#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <set>

#include "oracles.hpp"
#include "riskfront/baselines.hpp"
#include "riskfront/dolfin.hpp"
#include "riskfront/entrm_planning.hpp"
#include "riskfront/envs.hpp"
#include "riskfront/gpi.hpp"

using namespace riskfront;

namespace {

bool on_grid(double r, double unit) { return std::abs(r / unit - std::round(r / unit)) <= 1e-9; }

// Rows are numbered from the top; the start sits on the bottom row.
int cliff_state(const CliffParams& p, int col, int row) { return row * p.width + col; }

}  // namespace

TEST_CASE("inventory construction") {
  auto m = inventory_mdp();
  CHECK(validate(m).empty());
  REQUIRE(m.reward_unit);
  CHECK(*m.reward_unit == doctest::Approx(1.0 / 40.0));
  CHECK(m.horizon == 20);
  CHECK(m.initial_dist[0] == 1.0);
  // Stock 0 and no order: nothing to sell, no cost under the default convention.
  CHECK(m.r(0, 0, 0) == 0.0);
  const int empty = inventory_outcome_state(10, 0, 0);
  CHECK(m.p(0, 0, 0, empty) == 1.0);
  CHECK(m.r(0, empty, m.actions(0, empty)[0]) == 0.0);
  // Literal convention charges the fixed cost on every step.
  auto literal = inventory_mdp({.fixed_cost_only_if_ordering = false});
  CHECK(literal.r(0, 0, 0) == doctest::Approx(-3.0 / 40.0));
  // Ordering is capped by capacity.
  CHECK(m.actions(0, 4).size() == 7);
  CHECK(inventory_mdp({.clip_overflow = true}).actions(0, 4).size() == 11);
  CHECK(risk_neutral(m).mean_value > 0.0);
}

TEST_CASE("inventory rewards sit on the 1/(4M) grid") {
  for (bool flag : {true, false}) {
    auto m = inventory_mdp({.fixed_cost_only_if_ordering = flag});
    for (int x = 0; x < m.n_states; ++x) {
      for (int a : m.actions(0, x)) CHECK(on_grid(m.r(0, x, a), 1.0 / 40.0));
    }
  }
}

TEST_CASE("inventory demand is binomial on the stock after ordering") {
  auto m = inventory_mdp({.capacity = 4, .horizon = 2});
  // Stock 1, order 2: demand ~ Binomial(4, 1/2), sales capped at the stock of 3.
  const double expect[] = {1.0 / 16, 4.0 / 16, 6.0 / 16, 5.0 / 16};
  for (int sold = 0; sold <= 3; ++sold) {
    CHECK(m.p(0, 1, 2, inventory_outcome_state(4, 3 - sold, sold)) == doctest::Approx(expect[sold]));
  }
}

TEST_CASE("cliff construction") {
  CliffParams p;
  auto m = cliff_mdp(p);
  CHECK(validate(m).empty());
  CHECK(m.n_states == p.width * p.height + 1);
  CHECK(m.horizon == p.horizon + 1);
  REQUIRE(m.reward_unit);
  CHECK(*m.reward_unit == doctest::Approx(1.0 / (2 * p.horizon)));
  for (int t = 0; t < m.horizon; ++t) {
    for (int x = 0; x < m.n_states; ++x) {
      for (int a : m.actions(t, x)) {
        const double r = m.r(t, x, a);
        CHECK((r == -0.5 || on_grid(r, 1.0 / (2 * p.horizon))));
      }
    }
  }
  CHECK(m.initial_dist[cliff_state(p, 0, p.height - 1)] == 1.0);
  // Cells between start and goal are the cliff.
  const int fall = cliff_state(p, 5, p.height - 1);
  REQUIRE(m.actions(3, fall).size() == 1);
  CHECK(m.r(3, fall, 0) == -0.5);
  CHECK(m.r(3, cliff_state(p, p.width - 1, p.height - 1), 0) == doctest::Approx(1.0 - 3.0 / 30.0));
}

TEST_CASE("cliff without slip: the safe path never falls") {
  CliffParams p;
  p.slip = 0.0;
  auto m = cliff_mdp(p);
  CHECK(augmented_tp_dp(m, -0.5).optimal_prob == 0.0);
  CHECK(threshold_prob(initial_return(m, risk_neutral(m).policy), -0.5) == 0.0);
}

TEST_CASE("cliff: extreme risk aversion refuses the goal") {
  auto m = cliff_mdp();
  auto f = dolfin(m, 1e-2, -10.0);
  const auto& averse = f.entries.front().initial_return;
  const auto& neutral = f.entries.back().initial_return;
  CHECK(threshold_prob(averse, -0.5) <= threshold_prob(neutral, -0.5));
  CHECK(mean(averse) <= mean(neutral));
  // The most averse entry rarely reaches the goal: most of its mass sits at 0.
  CHECK(threshold_prob(averse, 0.0) > 0.5);
  // The front contains the exact threshold optimum.
  for (double t : {-0.5, 0.0}) {
    CHECK(gpi_select(f, RiskSpec::threshold(t)).value ==
          doctest::Approx(augmented_tp_dp(m, t).optimal_prob).epsilon(1e-6));
  }
}

TEST_CASE("random generators") {
  auto a = random_mdp(4, 3, 5, 99);
  auto b = random_mdp(4, 3, 5, 99);
  CHECK(a.transitions == b.transitions);
  CHECK(a.rewards == b.rewards);
  CHECK(a.initial_dist == b.initial_dist);
  CHECK(validate(a).empty());
  for (int x = 0; x < 4; ++x) {
    for (int u = 0; u < 3; ++u) {
      double s = 0.0;
      for (double p : a.row(0, x, u)) s += p;
      CHECK(std::abs(s - 1.0) <= 1e-9);
      CHECK(a.r(0, x, u) >= 0.0);
      CHECK(a.r(0, x, u) < 1.0);
    }
  }
  CHECK(random_mdp(4, 3, 5, 100).rewards != a.rewards);

  auto ds = random_simplex_problem(5, 11, 3);
  REQUIRE(ds.size() == 5);
  for (const auto& d : ds) {
    CHECK(d.min_support() >= 0.0);
    CHECK(d.max_support() <= 1.0);
    for (auto atom : d.atoms()) CHECK(on_grid(atom.support, 0.1));
  }
  CHECK(random_simplex_problem(5, 11, 3) == ds);
}

TEST_CASE("simplex sampling is uniform in the mean") {
  UniformStream rng(5);
  std::vector<double> acc(4, 0.0);
  for (int i = 0; i < 20000; ++i) {
    auto w = sample_simplex(4, rng);
    for (int k = 0; k < 4; ++k) acc[k] += w[k];
  }
  for (double v : acc) CHECK(std::abs(v / 20000.0 - 0.25) <= 0.01);
}
