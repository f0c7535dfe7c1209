#include "riskfront/dolfin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace riskfront {

namespace {

// Piecewise-constant policy and return of one state at one timestep.
struct StateFront {
  std::vector<double> cuts;     // ascending interior boundaries
  std::vector<int> actions;     // one per segment
  std::vector<int> dist_ids;    // one per segment, into the timestep's store

  std::size_t segment(double beta) const {
    return static_cast<std::size_t>(std::upper_bound(cuts.begin(), cuts.end(), beta) -
                                    cuts.begin());
  }
};

constexpr double kSameCut = 1e-12;

void push_unique_sorted(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double b : v) {
    if (out.empty() || b - out.back() > kSameCut) out.push_back(b);
  }
  v.swap(out);
}

}  // namespace

const FrontEntry& OptimalityFront::at(double beta) const {
  if (entries.empty()) throw std::logic_error("empty front");
  for (const FrontEntry& e : entries) {
    if (beta <= e.beta_hi) return e;
  }
  return entries.back();
}

std::vector<double> merge_breakpoints(std::span<const std::vector<double>> sets,
                                      std::span<const double> previous, double epsilon,
                                      double beta_min) {
  std::vector<double> all(previous.begin(), previous.end());
  for (const auto& s : sets) all.insert(all.end(), s.begin(), s.end());
  std::erase_if(all, [&](double b) { return !(b > beta_min && b < 0.0); });
  std::sort(all.begin(), all.end());
  std::vector<double> out;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i + 1;
    double sum = all[i];
    while (j < all.size() && all[j] - all[i] < epsilon) sum += all[j++];
    out.push_back(sum / static_cast<double>(j - i));
    i = j;
  }
  return out;
}

std::vector<Interval> refine_partition(std::span<const std::vector<double>> sets,
                                       std::span<const double> previous, double epsilon,
                                       double beta_min) {
  std::vector<double> cuts = merge_breakpoints(sets, previous, epsilon, beta_min);
  std::vector<Interval> out;
  double lo = beta_min;
  for (double c : cuts) {
    out.push_back({lo, c});
    lo = c;
  }
  out.push_back({lo, 0.0});
  return out;
}

OptimalityFront dolfin(const TabularMDP& mdp, double epsilon, double beta_min,
                       const DolfinOptions& opts) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("dolfin: epsilon outside (0,1)");
  if (!(beta_min < 0.0) || !std::isfinite(beta_min)) {
    throw std::invalid_argument("dolfin: beta_min must be finite and negative");
  }
  require_valid(mdp);
  const int H = mdp.horizon;
  const int S = mdp.n_states;

  OptimalityFront front;
  front.beta_min = beta_min;
  front.epsilon = epsilon;

  // fronts[t][x]; only the distributions of the timestep just computed are kept.
  std::vector<std::vector<StateFront>> fronts(H + 1, std::vector<StateFront>(S));
  std::vector<ReturnDistribution> next_store{ReturnDistribution::dirac(0.0)};
  for (int x = 0; x < S; ++x) fronts[H][x] = {{}, {0}, {0}};

  std::vector<std::vector<double>> cuts_by_step(H + 1);
  for (int t = H - 1; t >= 0; --t) {
    std::vector<ReturnDistribution> store;
    for (int x = 0; x < S; ++x) {
      const auto& acts = mdp.actions(t, x);
      std::vector<int> succ;
      for (int xn = 0; xn < S; ++xn) {
        for (int a : acts) {
          if (mdp.p(t, x, a, xn) > 0.0) {
            succ.push_back(xn);
            break;
          }
        }
      }
      // Sub-intervals on which every successor's return is constant.
      std::vector<double> cuts;
      for (int xn : succ) {
        const auto& c = fronts[t + 1][xn].cuts;
        cuts.insert(cuts.end(), c.begin(), c.end());
      }
      push_unique_sorted(cuts);
      std::vector<double> bounds{beta_min};
      bounds.insert(bounds.end(), cuts.begin(), cuts.end());
      bounds.push_back(0.0);

      // Segments collected from the top interval downwards, then reversed.
      std::vector<double> seg_lo;
      std::vector<int> seg_action;
      std::vector<int> seg_dist;
      for (std::size_t k = bounds.size() - 1; k-- > 0;) {
        const double lo = bounds[k];
        const double hi = bounds[k + 1];
        const double mid = 0.5 * (lo + hi);
        std::vector<ReturnDistribution> eta;
        eta.reserve(acts.size());
        for (int a : acts) {
          std::vector<double> w;
          std::vector<const ReturnDistribution*> comps;
          auto row = mdp.row(t, x, a);
          for (int xn = 0; xn < S; ++xn) {
            if (row[xn] <= 0.0) continue;
            const StateFront& sf = fronts[t + 1][xn];
            w.push_back(row[xn]);
            comps.push_back(&next_store[sf.dist_ids[sf.segment(mid)]]);
          }
          eta.push_back(shift(mixture(w, comps, opts.dist), mdp.r(t, x, a)));
        }
        LocalFront local = find_breaks(std::span<const ReturnDistribution>(eta), lo, hi,
                                       epsilon, opts.find);
        front.total_eval_count += local.eval_count;
        for (auto it = local.segments.rbegin(); it != local.segments.rend(); ++it) {
          const int a = acts[it->action];
          ReturnDistribution& d = eta[it->action];
          // An unchanged action with an unchanged return continues the segment above.
          if (!seg_action.empty() && seg_action.back() == a && store[seg_dist.back()] == d) {
            seg_lo.back() = it->lo;
            continue;
          }
          seg_lo.push_back(it->lo);
          seg_action.push_back(a);
          store.push_back(d);
          seg_dist.push_back(static_cast<int>(store.size() - 1));
        }
      }
      // seg_* run from the top segment down; the lowest segment starts at beta_min.
      StateFront sf;
      for (std::size_t i = seg_lo.size(); i-- > 0;) {
        if (i + 1 < seg_lo.size()) sf.cuts.push_back(seg_lo[i]);
        sf.actions.push_back(seg_action[i]);
        sf.dist_ids.push_back(seg_dist[i]);
      }
      cuts_by_step[t].insert(cuts_by_step[t].end(), sf.cuts.begin(), sf.cuts.end());
      fronts[t][x] = std::move(sf);
    }
    next_store = std::move(store);
  }

  // Breakpoints discovered at timestep t or later.
  front.breakpoints_by_step.assign(H + 1, {});
  std::vector<double> acc;
  for (int t = H - 1; t >= 0; --t) {
    acc.insert(acc.end(), cuts_by_step[t].begin(), cuts_by_step[t].end());
    std::vector<std::vector<double>> sets{acc};
    front.breakpoints_by_step[t] = merge_breakpoints(sets, {}, epsilon, beta_min);
  }

  std::vector<std::vector<double>> sets{acc};
  std::vector<Interval> parts = refine_partition(sets, {}, epsilon, beta_min);
  for (const Interval& iv : parts) {
    const double mid = iv.mid();
    MarkovPolicy pi;
    pi.actions.assign(H, std::vector<int>(S, 0));
    for (int t = 0; t < H; ++t) {
      for (int x = 0; x < S; ++x) {
        const StateFront& sf = fronts[t][x];
        pi.actions[t][x] = sf.actions[sf.segment(mid)];
      }
    }
    std::vector<double> w;
    std::vector<const ReturnDistribution*> comps;
    for (int x = 0; x < S; ++x) {
      if (mdp.initial_dist[x] <= 0.0) continue;
      const StateFront& sf = fronts[0][x];
      w.push_back(mdp.initial_dist[x]);
      comps.push_back(&next_store[sf.dist_ids[sf.segment(mid)]]);
    }
    ReturnDistribution init = mixture(w, comps, opts.dist);
    if (!front.entries.empty() &&
        sup_cdf_distance(front.entries.back().initial_return, init) <= opts.dedupe_tol) {
      front.entries.back().beta_hi = iv.hi;
      continue;
    }
    front.entries.push_back({std::move(pi), iv.lo, iv.hi, std::move(init)});
  }
  for (std::size_t i = 1; i < front.entries.size(); ++i) {
    front.breakpoints.push_back(front.entries[i].beta_lo);
  }
  return front;
}

std::optional<double> cauchy_beta_bound(const ReturnDistribution& ref,
                                        const ReturnDistribution& other) {
  std::vector<double> xs;
  for (const Atom& a : ref.atoms()) xs.push_back(a.support);
  for (const Atom& a : other.atoms()) xs.push_back(a.support);
  push_unique_sorted(xs);
  if (xs.size() < 2) throw std::invalid_argument("cauchy_beta_bound: distributions are identical");
  double spacing = INFINITY;
  for (std::size_t i = 1; i < xs.size(); ++i) spacing = std::min(spacing, xs[i] - xs[i - 1]);
  const double x0 = xs.front();
  const auto n = static_cast<std::size_t>(std::llround((xs.back() - x0) / spacing)) + 1;
  std::vector<double> coef(n, 0.0);
  auto place = [&](const ReturnDistribution& d, double sign) {
    for (const Atom& a : d.atoms()) {
      double pos = (a.support - x0) / spacing;
      auto k = static_cast<std::size_t>(std::llround(pos));
      if (std::abs(pos - static_cast<double>(k)) > 1e-6) {
        throw std::invalid_argument("cauchy_beta_bound: supports are not on an even grid");
      }
      coef[k] += sign * a.prob;
    }
  };
  place(ref, 1.0);
  place(other, -1.0);
  double worst = 0.0;
  for (std::size_t i = 1; i < n; ++i) worst = std::max(worst, std::abs(coef[i]));
  if (std::max(worst, std::abs(coef[0])) <= 1e-15) {
    throw std::invalid_argument("cauchy_beta_bound: distributions are identical");
  }
  if (std::abs(coef[0]) <= 1e-15) return std::nullopt;
  return -std::log1p(worst / std::abs(coef[0])) / spacing;
}

SwitchReport diagnose_single_switch(const OptimalityFront& front, const TabularMDP& mdp) {
  SwitchReport report;
  for (std::size_t i = 1; i < front.entries.size(); ++i) {
    const MarkovPolicy& a = front.entries[i - 1].policy;
    const MarkovPolicy& b = front.entries[i].policy;
    int n = 0;
    for (int t = 0; t < mdp.horizon; ++t) {
      for (int x = 0; x < mdp.n_states; ++x) n += a(t, x) != b(t, x);
    }
    report.changes.push_back(n);
    ++report.histogram[n];
  }
  return report;
}

}  // namespace riskfront
