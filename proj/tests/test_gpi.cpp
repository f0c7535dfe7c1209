#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "riskfront/baselines.hpp"
#include "riskfront/dolfin.hpp"
#include "riskfront/entrm_planning.hpp"
#include "riskfront/envs.hpp"
#include "riskfront/gpi.hpp"

using namespace riskfront;

namespace {

OptimalityFront constant_front(double c, double beta_min = -10.0) {
  OptimalityFront f;
  f.beta_min = beta_min;
  f.entries.push_back({MarkovPolicy{{{0}}}, beta_min, 0.0, ReturnDistribution::dirac(c)});
  return f;
}

const OptimalityFront& inventory_front() {
  static const OptimalityFront f = dolfin(inventory_mdp(), 1e-2, -10.0);
  return f;
}

}  // namespace

TEST_CASE("gpi picks the entry that is optimal for its own entrm") {
  std::uint64_t seed = 21;
  OptimalityFront f;
  do {
    f = dolfin(random_mdp(3, 3, 3, seed++), 1e-3, -10.0);
  } while (f.entries.size() < 3);
  for (std::size_t k = 0; k < f.entries.size(); ++k) {
    const double mid = 0.5 * (f.entries[k].beta_lo + f.entries[k].beta_hi);
    auto c = gpi_select(f, RiskSpec::entrm(mid));
    CHECK(c.value == doctest::Approx(entrm(f.entries[k].initial_return, mid)).epsilon(1e-12));
  }
  auto mean_choice = gpi_select(f, RiskSpec::mean());
  CHECK(mean_choice.interval.hi == 0.0);
  CHECK(mean_choice.entry == f.entries.size() - 1);
}

TEST_CASE("tp proxy closed forms") {
  auto f = constant_front(2.0);
  auto p = optimize_tp_proxy(f, 1.0);
  CHECK(p.beta == doctest::Approx(-10.0).epsilon(1e-6));
  CHECK(p.value == doctest::Approx(std::exp(-10.0 * (2.0 - 1.0))).epsilon(1e-6));
  auto q = optimize_tp_proxy(f, 2.5);
  CHECK(q.value == doctest::Approx(1.0));
}

TEST_CASE("evar proxy") {
  auto f = constant_front(1.5);
  CHECK(optimize_evar(f, 0.1).value == doctest::Approx(1.5 - std::log(0.1) / -10.0).epsilon(1e-9));
  CHECK(optimize_evar(constant_front(1.5, -1e4), 0.1).value == doctest::Approx(1.5).epsilon(1e-3));

  // Safe constant against a coin: the coin wins near zero, the constant far from it.
  auto m = oracle::one_shot_mdp({ReturnDistribution::dirac(0.4),
                                 ReturnDistribution::from_atoms({{0.0, 0.5}, {1.0, 0.5}})});
  auto front = dolfin(m, 1e-4, -10.0);
  REQUIRE(front.entries.size() == 2);
  for (double alpha : {0.05, 0.3, 0.6}) {
    auto e = optimize_evar(front, alpha);
    double grid = -INFINITY;
    for (double beta = -10.0; beta <= -1e-4; beta += 1e-4) {
      grid = std::max(grid, entrm(front.at(beta).initial_return, beta) - std::log(alpha) / beta);
    }
    CHECK(e.value >= grid - 1e-9);
    CHECK(e.value <= grid + 1e-5);
    // The chosen policy is entrm-optimal at the chosen beta.
    const double opt = initial_value(m, entrm_value_iteration(m, e.beta));
    CHECK(entrm(initial_return(m, e.policy), e.beta) == doctest::Approx(opt).epsilon(1e-9));
  }
}

TEST_CASE("property: gpi dominance and bound validity on random fronts") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    auto m = random_mdp(4, 3, 4, 1500 + seed);
    auto f = dolfin(m, 1e-2, -10.0);
    const double mu = initial_value(m, entrm_value_iteration(m, 0.0));
    for (double alpha : {0.05, 0.1, 0.25}) {
      auto proxy = optimize_evar(f, alpha);
      auto proxy_d = initial_return(m, proxy.policy);
      CHECK(gpi_select(f, RiskSpec::var(alpha)).value >= value_at_risk(proxy_d, alpha));
      CHECK(gpi_select(f, RiskSpec::cvar(alpha)).value >= cvar(proxy_d, alpha) - 1e-12);
    }
    for (double rel : {0.25, 0.5, 0.75, 1.0}) {
      const double t = rel * mu;
      auto proxy = optimize_tp_proxy(f, t);
      const double gpi = gpi_select(f, RiskSpec::threshold(t)).value;
      CHECK(gpi <= threshold_prob(initial_return(m, proxy.policy), t));
      CHECK(proxy.value >= gpi - 1e-12);
    }
  }
}

TEST_CASE("inventory: tp proxy bounds the front and the optimum") {
  const auto& f = inventory_front();
  const double mu = risk_neutral(inventory_mdp()).mean_value;
  const double t = 0.25 * mu;
  auto proxy = optimize_tp_proxy(f, t);
  CHECK(proxy.value >= gpi_select(f, RiskSpec::threshold(t)).value);
  CHECK(proxy.value >= 1.26e-5);
  CHECK(proxy.value >= 6.29e-7);
}

TEST_CASE("inventory: gpi cvar at 0.05") {
  const double v = gpi_select(inventory_front(), RiskSpec::cvar(0.05)).value;
  CHECK(std::abs(v - 1.14) <= 0.05);
}
