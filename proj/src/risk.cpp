#include "riskfront/risk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace riskfront {

namespace {

void check_alpha(double alpha, const char* who) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument(std::string(who) + ": alpha outside (0,1]");
  }
}

}  // namespace

std::string kind_name(RiskKind kind) {
  switch (kind) {
    case RiskKind::Mean: return "mean";
    case RiskKind::EntRM: return "entrm";
    case RiskKind::VaR: return "var";
    case RiskKind::CVaR: return "cvar";
    case RiskKind::EVaR: return "evar";
    case RiskKind::ThresholdProb: return "threshold";
  }
  return "unknown";
}

RiskKind parse_kind(const std::string& name) {
  for (RiskKind k : {RiskKind::Mean, RiskKind::EntRM, RiskKind::VaR, RiskKind::CVaR,
                     RiskKind::EVaR, RiskKind::ThresholdProb}) {
    if (kind_name(k) == name) return k;
  }
  throw std::invalid_argument("unknown risk kind '" + name + "'");
}

double entrm(const ReturnDistribution& d, double beta) {
  if (std::abs(beta) < kZeroBeta) return mean(d);
  // Shift by the atom maximizing beta*x so every exponent is <= 0.
  const double m = beta < 0.0 ? d.min_support() : d.max_support();
  double sum = 0.0;
  double sum_m1 = 0.0;
  for (const Atom& a : d.atoms()) {
    double y = beta * (a.support - m);
    sum += a.prob * std::exp(y);
    sum_m1 += a.prob * std::expm1(y);
  }
  // Near beta = 0 the sum is close to 1 and log1p keeps the digits log would lose.
  double log_mgf = sum > 0.5 ? std::log1p(sum_m1) : std::log(sum);
  return m + log_mgf / beta;
}

double exp_form(const ReturnDistribution& d, double beta) {
  if (std::abs(beta) < kZeroBeta) return mean(d);
  double sum = 0.0;
  for (const Atom& a : d.atoms()) sum += a.prob * std::exp(beta * a.support);
  return beta < 0.0 ? -sum : sum;
}

double value_at_risk(const ReturnDistribution& d, double alpha) {
  check_alpha(alpha, "var");
  return quantile(d, alpha);
}

double cvar(const ReturnDistribution& d, double alpha) {
  check_alpha(alpha, "cvar");
  double remaining = alpha;
  double acc = 0.0;
  for (const Atom& a : d.atoms()) {
    double take = std::min(a.prob, remaining);
    acc += take * a.support;
    remaining -= take;
    if (remaining <= 0.0) break;
  }
  // Rounding can leave a sliver of alpha unassigned; it belongs to the top atom.
  if (remaining > 0.0) acc += remaining * d.max_support();
  return acc / alpha;
}

EvarResult evar(const ReturnDistribution& d, double alpha, double beta_min) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("evar: alpha outside (0,1)");
  if (!(beta_min < 0.0)) throw std::invalid_argument("evar: beta_min must be negative");
  const double hi = std::max(beta_min, -1e-9);
  const double log_alpha = std::log(alpha);
  auto g = [&](double beta) { return entrm(d, beta) - log_alpha / beta; };
  auto [beta, value] = golden_max(g, beta_min, hi);
  return {value, beta};
}

double threshold_prob(const ReturnDistribution& d, double t) { return cdf(d, t); }

double chernoff_tp_objective(const ReturnDistribution& d, double beta, double t) {
  if (!(beta < 0.0)) throw std::invalid_argument("chernoff: beta must be negative");
  if (beta > -kZeroBeta) return 1.0;
  return std::exp(beta * (entrm(d, beta) - t));
}

double evaluate(const ReturnDistribution& d, const RiskSpec& spec, double evar_beta_min) {
  switch (spec.kind) {
    case RiskKind::Mean: return mean(d);
    case RiskKind::EntRM: return entrm(d, spec.param);
    case RiskKind::VaR: return value_at_risk(d, spec.param);
    case RiskKind::CVaR: return cvar(d, spec.param);
    case RiskKind::EVaR: return evar(d, spec.param, evar_beta_min).value;
    case RiskKind::ThresholdProb: return threshold_prob(d, spec.param);
  }
  throw std::invalid_argument("evaluate: unknown risk kind");
}

}  // namespace riskfront
