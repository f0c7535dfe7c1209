#include "riskfront/gpi.hpp"

#include <cmath>
#include <stdexcept>

namespace riskfront {

namespace {

constexpr double kBetaCeil = -1e-9;

void require_entries(const OptimalityFront& front) {
  if (front.entries.empty()) throw std::invalid_argument("empty optimality front");
}

}  // namespace

GpiChoice gpi_select(const OptimalityFront& front, const RiskSpec& spec, double evar_beta_min) {
  require_entries(front);
  GpiChoice best;
  bool have = false;
  for (std::size_t i = 0; i < front.entries.size(); ++i) {
    const FrontEntry& e = front.entries[i];
    double v = evaluate(e.initial_return, spec, evar_beta_min);
    if (!have || spec.better(v, best.value)) {
      best = {e.policy, v, i, {e.beta_lo, e.beta_hi}};
      have = true;
    }
  }
  return best;
}

ProxyChoice optimize_tp_proxy(const OptimalityFront& front, double t) {
  require_entries(front);
  ProxyChoice best;
  best.value = INFINITY;
  for (std::size_t i = 0; i < front.entries.size(); ++i) {
    const FrontEntry& e = front.entries[i];
    // log of the Chernoff objective is convex in beta; at beta -> 0 the bound is 1.
    auto neg_log = [&](double beta) {
      if (beta > kBetaCeil) return 0.0;
      return -beta * (entrm(e.initial_return, beta) - t);
    };
    auto [beta, v] = golden_max(neg_log, e.beta_lo, e.beta_hi, 1e-8);
    double bound = std::exp(-v);
    if (bound < best.value) best = {beta, e.policy, bound, i};
  }
  return best;
}

ProxyChoice optimize_evar(const OptimalityFront& front, double alpha) {
  require_entries(front);
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("optimize_evar: alpha outside (0,1)");
  const double log_alpha = std::log(alpha);
  ProxyChoice best;
  best.value = -INFINITY;
  for (std::size_t i = 0; i < front.entries.size(); ++i) {
    const FrontEntry& e = front.entries[i];
    const double hi = std::min(e.beta_hi, kBetaCeil);
    if (e.beta_lo > hi) continue;
    auto g = [&](double beta) { return entrm(e.initial_return, beta) - log_alpha / beta; };
    auto [beta, v] = hi > e.beta_lo ? golden_max(g, e.beta_lo, hi)
                                    : std::pair<double, double>{hi, g(hi)};
    if (v > best.value) best = {beta, e.policy, v, i};
  }
  return best;
}

}  // namespace riskfront
