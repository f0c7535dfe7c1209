#pragma once

#include <cstddef>

#include "riskfront/dolfin.hpp"
#include "riskfront/risk.hpp"

namespace riskfront {

struct GpiChoice {
  MarkovPolicy policy;
  double value = 0.0;
  std::size_t entry = 0;
  Interval interval{0.0, 0.0};
};

/// Best front entry under spec. Ties go to the entry with the more negative interval.
GpiChoice gpi_select(const OptimalityFront& front, const RiskSpec& spec,
                     double evar_beta_min = -10.0);

struct ProxyChoice {
  double beta = 0.0;
  MarkovPolicy policy;
  /// Chernoff bound on P(R <= t) for optimize_tp_proxy, EVaR lower bound for optimize_evar.
  double value = 0.0;
  std::size_t entry = 0;
};

/// Minimizes the Chernoff bound exp(-beta t) E[exp(beta R)] over the front.
ProxyChoice optimize_tp_proxy(const OptimalityFront& front, double t);

/// Maximizes entrm(R, beta) - log(alpha) / beta over the front.
ProxyChoice optimize_evar(const OptimalityFront& front, double alpha);

}  // namespace riskfront
