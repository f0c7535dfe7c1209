#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

#include "oracles.hpp"
#include "riskfront/risk.hpp"

using namespace riskfront;

namespace {

ReturnDistribution coin() { return ReturnDistribution::from_atoms({{0.0, 0.5}, {1.0, 0.5}}); }

}  // namespace

TEST_CASE("entrm examples") {
  CHECK(entrm(ReturnDistribution::dirac(1.7), -2.0) == doctest::Approx(1.7).epsilon(1e-14));
  CHECK(entrm(coin(), 0.0) == 0.5);
  const double direct = static_cast<double>(oracle::entrm(oracle::to_pmf(coin()), -1.0));
  CHECK(entrm(coin(), -1.0) == doctest::Approx(direct).epsilon(1e-12));
  CHECK(std::abs(entrm(coin(), -1.0) - 0.379885) <= 1e-6);
}

TEST_CASE("entrm is accurate near zero and for large |beta|") {
  auto d = oracle::random_dist(3, 8);
  // Near zero the second-order expansion mean + beta/2 var is exact to O(beta^2).
  const double m = mean(d);
  double var = 0.0;
  for (auto a : d.atoms()) var += a.prob * (a.support - m) * (a.support - m);
  for (double beta : {1e-11, -1e-10, 1e-8, -1e-7}) {
    CHECK(std::abs(entrm(d, beta) - (m + 0.5 * beta * var)) <= 1e-13);
  }
  for (double beta : {-1e-3, 0.5, 40.0, -300.0}) {
    const double direct = static_cast<double>(oracle::entrm(oracle::to_pmf(d), beta));
    CHECK(entrm(d, beta) == doctest::Approx(direct).epsilon(1e-12));
  }
  CHECK(std::isfinite(entrm(d, -1e5)));
  CHECK(entrm(d, -1e5) >= d.min_support() - 1e-12);
}

TEST_CASE("exp_form") {
  CHECK(exp_form(ReturnDistribution::dirac(0), -1.0) == -1.0);
  CHECK(std::abs(exp_form(coin(), -1.0) - (-0.683940)) <= 1e-6);
  auto other = ReturnDistribution::from_atoms({{0.0, 0.99}, {2.0, 0.01}});
  CHECK((entrm(coin(), -1.0) > entrm(other, -1.0)) ==
        (exp_form(coin(), -1.0) > exp_form(other, -1.0)));
}

TEST_CASE("var and cvar") {
  for (double alpha : {0.05, 0.5, 1.0}) {
    CHECK(cvar(ReturnDistribution::dirac(2.5), alpha) == doctest::Approx(2.5));
    CHECK(value_at_risk(ReturnDistribution::dirac(2.5), alpha) == 2.5);
  }
  auto d = ReturnDistribution::from_atoms({{0.0, 0.25}, {1.0, 0.75}});
  CHECK(cvar(d, 0.5) == doctest::Approx(0.5));
  CHECK(cvar(d, 0.5) == doctest::Approx(oracle::cvar(oracle::to_pmf(d), 0.5)));
  CHECK(cvar(coin(), 1.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(cvar(coin(), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(value_at_risk(coin(), 1.5), std::invalid_argument);
}

TEST_CASE("evar") {
  // For a constant only the -log(alpha)/beta term remains, so the supremum sits at beta_min.
  CHECK(evar(ReturnDistribution::dirac(3.0), 0.1).value ==
        doctest::Approx(3.0 + std::log(0.1) / 10.0).epsilon(1e-12));
  CHECK(std::abs(evar(ReturnDistribution::dirac(3.0), 0.1, -1e7).value - 3.0) <= 1e-6);
  CHECK(std::abs(evar(coin(), 0.5, -50.0).value) <= 1e-6);
  auto tri = ReturnDistribution::from_atoms({{0.0, 0.25}, {1.0, 0.5}, {2.0, 0.25}});
  const auto e = evar(tri, 0.25);
  CHECK(e.value <= cvar(tri, 0.25) + 1e-12);
  CHECK(cvar(tri, 0.25) <= value_at_risk(tri, 0.25) + 1e-12);
  CHECK(e.value == doctest::Approx(oracle::evar(oracle::to_pmf(tri), 0.25, -10.0)).epsilon(1e-6));
  CHECK(e.beta <= 0.0);
  CHECK(e.beta >= -10.0);
  CHECK_THROWS_AS(evar(tri, 1.0), std::invalid_argument);
}

TEST_CASE("threshold probability and chernoff") {
  CHECK(threshold_prob(ReturnDistribution::dirac(1), 0.0) == 0.0);
  CHECK(threshold_prob(coin(), 0.0) == 0.5);
  CHECK(value_at_risk(coin(), 0.5) == 0.0);
  CHECK(threshold_prob(coin(), value_at_risk(coin(), 0.5)) >= 0.5);
  CHECK(std::abs(chernoff_tp_objective(coin(), -1.0, 0.0) - 0.683940) <= 1e-6);
  CHECK(chernoff_tp_objective(coin(), -1.0, 0.0) >= 0.5);
  CHECK(chernoff_tp_objective(ReturnDistribution::dirac(1), -10.0, 0.0) ==
        doctest::Approx(std::exp(-10.0)).epsilon(1e-12));
  CHECK_THROWS_AS(chernoff_tp_objective(coin(), 0.5, 0.0), std::invalid_argument);
}

TEST_CASE("evaluate dispatch and kind names") {
  CHECK(evaluate(coin(), RiskSpec::mean()) == 0.5);
  CHECK(evaluate(coin(), RiskSpec::var(0.5)) == 0.0);
  CHECK(evaluate(ReturnDistribution::dirac(4.0), RiskSpec::entrm(-3.0)) == doctest::Approx(4.0));
  CHECK(evaluate(coin(), RiskSpec::threshold(0.0)) == 0.5);
  for (RiskKind k : {RiskKind::Mean, RiskKind::EntRM, RiskKind::VaR, RiskKind::CVaR,
                     RiskKind::EVaR, RiskKind::ThresholdProb}) {
    CHECK(parse_kind(kind_name(k)) == k);
  }
  CHECK_THROWS_AS(parse_kind("median"), std::invalid_argument);
  CHECK(RiskSpec::threshold(0).better(0.1, 0.2));
  CHECK(RiskSpec::cvar(0.1).better(0.2, 0.1));
}

TEST_CASE("property: entrm is nondecreasing in beta") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    auto d = oracle::random_dist(s, 7);
    double prev = -INFINITY;
    for (double beta = -20.0; beta <= 5.0; beta += 0.05) {
      double v = entrm(d, beta);
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("property: entrm tends to the minimum atom") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int s = 0; s < 30; ++s) {
    std::vector<Atom> atoms;
    double total = 0.0;
    for (int i = 0; i < 5; ++i) {
      atoms.push_back({u(rng), 0.01 + u(rng)});
      total += atoms.back().prob;
    }
    for (auto& a : atoms) a.prob /= total;
    // Keep every probability at or above 0.01.
    bool ok = true;
    for (auto& a : atoms) ok = ok && a.prob >= 0.01;
    if (!ok) continue;
    auto d = ReturnDistribution::from_atoms(atoms);
    // The gap is -log(p_min)/50 plus the contribution of the next atom.
    const double direct = static_cast<double>(oracle::entrm(oracle::to_pmf(d), -50.0));
    CHECK(entrm(d, -50.0) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(entrm(d, -50.0) - d.min_support() <= -std::log(d.atoms()[0].prob) / 50.0 + 1e-12);
  }
}

TEST_CASE("property: gaussian entrm is mean plus beta/2 variance") {
  std::vector<Atom> atoms;
  double total = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double x = -6.0 + 12.0 * i / 200.0;
    atoms.push_back({x, std::exp(-0.5 * x * x)});
    total += atoms.back().prob;
  }
  for (auto& a : atoms) a.prob /= total;
  auto d = ReturnDistribution::from_atoms(atoms);
  for (double beta : {-1.0, -0.5}) CHECK(std::abs(entrm(d, beta) - beta / 2.0) <= 1e-3);
}

TEST_CASE("property: risk measure chain and chernoff validity") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::uint64_t s = 0; s < 100; ++s) {
    auto d = oracle::random_dist(1000 + s, 2 + static_cast<int>(s % 9));
    for (double alpha : {0.05, 0.1, 0.25}) {
      const double e = evar(d, alpha).value;
      const double c = cvar(d, alpha);
      const double v = value_at_risk(d, alpha);
      CHECK(e <= c + 1e-9);
      CHECK(c <= v + 1e-12);
      CHECK(c == doctest::Approx(oracle::cvar(oracle::to_pmf(d), alpha)).epsilon(1e-12));
    }
    const double beta = -0.01 - 10.0 * u(rng);
    const double t = -1.0 + 3.0 * u(rng);
    CHECK(chernoff_tp_objective(d, beta, t) >= threshold_prob(d, t) - 1e-12);
  }
}

TEST_CASE("property: entrm and exp_form induce the same ordering") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  int compared = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    auto d1 = oracle::random_dist(2000 + 2 * s, 4);
    auto d2 = oracle::random_dist(2001 + 2 * s, 4);
    double beta = u(rng);
    if (std::abs(beta) < 1e-3) continue;
    const double de = entrm(d1, beta) - entrm(d2, beta);
    if (std::abs(de) <= 1e-9) continue;
    ++compared;
    CHECK((de > 0) == (exp_form(d1, beta) - exp_form(d2, beta) > 0));
  }
  CHECK(compared > 150);
}
