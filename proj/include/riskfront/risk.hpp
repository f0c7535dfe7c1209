#pragma once

#include <string>

#include "riskfront/distribution.hpp"

namespace riskfront {

/// Below this magnitude a risk parameter is treated as zero (the mean).
inline constexpr double kZeroBeta = 1e-12;

enum class RiskKind { Mean, EntRM, VaR, CVaR, EVaR, ThresholdProb };

/// A static risk functional. param is beta for EntRM, alpha for the
/// quantile-based kinds and the threshold for ThresholdProb.
struct RiskSpec {
  RiskKind kind = RiskKind::Mean;
  double param = 0.0;

  static RiskSpec mean() { return {RiskKind::Mean, 0.0}; }
  static RiskSpec entrm(double beta) { return {RiskKind::EntRM, beta}; }
  static RiskSpec var(double alpha) { return {RiskKind::VaR, alpha}; }
  static RiskSpec cvar(double alpha) { return {RiskKind::CVaR, alpha}; }
  static RiskSpec evar(double alpha) { return {RiskKind::EVaR, alpha}; }
  static RiskSpec threshold(double t) { return {RiskKind::ThresholdProb, t}; }

  /// Threshold probabilities are minimized, everything else maximized.
  bool minimize() const { return kind == RiskKind::ThresholdProb; }
  /// True when a is strictly preferred to b under this spec.
  bool better(double a, double b) const { return minimize() ? a < b : a > b; }

  friend bool operator==(const RiskSpec&, const RiskSpec&) = default;
};

std::string kind_name(RiskKind kind);
/// Inverse of kind_name; throws std::invalid_argument on unknown names.
RiskKind parse_kind(const std::string& name);

/// Entropic risk (1/beta) log E[exp(beta X)], the mean at beta = 0.
double entrm(const ReturnDistribution& d, double beta);

/// sign(beta) E[exp(beta X)], the mean at beta = 0. Orders distributions like entrm.
double exp_form(const ReturnDistribution& d, double beta);

/// Low-tail quantile.
double value_at_risk(const ReturnDistribution& d, double alpha);

/// Mean of the alpha-worst fraction of outcomes.
double cvar(const ReturnDistribution& d, double alpha);

struct EvarResult {
  double value;
  double beta;
};

/// sup over beta in [beta_min, 0) of entrm(d, beta) - log(alpha) / beta.
EvarResult evar(const ReturnDistribution& d, double alpha, double beta_min = -10.0);

/// P(X <= t).
double threshold_prob(const ReturnDistribution& d, double t);

/// exp(-beta t) E[exp(beta X)] for beta < 0, an upper bound on P(X <= t).
double chernoff_tp_objective(const ReturnDistribution& d, double beta, double t);

/// Dispatch on spec. EVaR uses evar_beta_min as the search floor.
double evaluate(const ReturnDistribution& d, const RiskSpec& spec, double evar_beta_min = -10.0);

/// Maximizes a quasiconcave function on [lo, hi] by golden-section search and
/// returns the best of the search point and both endpoints.
template <class F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, double width_tol = 1e-9,
                                     int max_iter = 200);

}  // namespace riskfront

#include "riskfront/detail/golden.hpp"
