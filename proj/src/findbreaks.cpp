#include "riskfront/findbreaks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "riskfront/risk.hpp"

namespace riskfront {

JumpStep action_jump(double beta, std::span<const double> values, double r_min, double r_max,
                     SweepDirection dir, double min_step, double tie_tol) {
  if (values.size() < 2) return {INFINITY, true};
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  double second = -INFINITY;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i != best) second = std::max(second, values[i]);
  }
  const double gap = values[best] - second;
  if (gap <= tie_tol) return {min_step, false};

  const double range = r_max - r_min;
  double step;
  if (std::abs(beta) < kZeroBeta) {
    step = range > 0.0 ? 8.0 * gap / (range * range) : INFINITY;
  } else {
    // Moving away from zero the runner-up's value is the one that can rise;
    // moving towards zero it is the leader's value that can fall.
    const bool away = (beta < 0.0) == (dir == SweepDirection::Down);
    double spread;
    if (beta < 0.0) {
      spread = (away ? second : values[best]) - r_min;
    } else {
      spread = r_max - (away ? values[best] : second);
    }
    step = spread > 0.0 ? std::abs(beta) * gap / spread : INFINITY;
    // The bounds are only valid while beta keeps its sign.
    if (!away) step = std::min(step, std::abs(beta));
  }
  return {std::max(step, min_step), false};
}

namespace {

struct Probe {
  double beta;
  int best;
  std::vector<double> values;
};

struct Change {
  double at;
  int action;
};

class Sweeper {
 public:
  Sweeper(std::span<const ReturnDistribution* const> reps, double r_min, double r_max,
          double epsilon, const FindBreaksOptions& opts)
      : reps_(reps), r_min_(r_min), r_max_(r_max), eps_(epsilon), opts_(opts) {}

  Probe probe(double beta) {
    ++evals_;
    Probe p{beta, 0, {}};
    p.values.reserve(reps_.size());
    for (const ReturnDistribution* d : reps_) p.values.push_back(entrm(*d, beta));
    for (std::size_t i = 1; i < p.values.size(); ++i) {
      if (p.values[i] > p.values[p.best]) p.best = static_cast<int>(i);
    }
    return p;
  }

  // Walks from start.beta to end; returns the argmax changes in sweep order.
  std::vector<Change> sweep(Probe cur, double end) {
    std::vector<Change> changes;
    const SweepDirection dir = end < cur.beta ? SweepDirection::Down : SweepDirection::Up;
    while (cur.beta != end) {
      JumpStep j = action_jump(cur.beta, cur.values, r_min_, r_max_, dir, eps_, opts_.tie_tol);
      double next;
      if (dir == SweepDirection::Down) {
        next = j.unbounded ? end : std::max(cur.beta - j.step, end);
      } else {
        next = j.unbounded ? end : std::min(cur.beta + j.step, end);
      }
      Probe nx = probe(next);
      if (nx.best == cur.best) {
        cur = std::move(nx);
        continue;
      }
      // Bracket the first change to within epsilon. A certified jump larger than
      // epsilon only lands on a different action through rounding at its edge.
      Probe a = std::move(cur);
      Probe b = std::move(nx);
      int extra = opts_.refine_iters;
      while (std::abs(b.beta - a.beta) > eps_ || extra-- > 0) {
        Probe mid = probe(0.5 * (a.beta + b.beta));
        if (mid.best == a.best) {
          a = std::move(mid);
        } else {
          b = std::move(mid);
        }
      }
      changes.push_back({0.5 * (a.beta + b.beta), b.best});
      cur = std::move(b);
    }
    return changes;
  }

  int evals() const { return evals_; }

 private:
  std::span<const ReturnDistribution* const> reps_;
  double r_min_;
  double r_max_;
  double eps_;
  FindBreaksOptions opts_;
  int evals_ = 0;
};

}  // namespace

LocalFront find_breaks(std::span<const ReturnDistribution* const> dists, double lo, double hi,
                       double epsilon, const FindBreaksOptions& opts) {
  if (dists.empty()) throw std::invalid_argument("find_breaks: no actions");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("find_breaks: epsilon outside (0,1)");
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::invalid_argument("find_breaks: need a finite interval with lo < hi");
  }

  // Identical distributions form one candidate, named by its lowest action index.
  std::vector<const ReturnDistribution*> reps;
  std::vector<int> rep_action;
  double r_min = INFINITY;
  double r_max = -INFINITY;
  for (std::size_t a = 0; a < dists.size(); ++a) {
    const ReturnDistribution* d = dists[a];
    r_min = std::min(r_min, d->min_support());
    r_max = std::max(r_max, d->max_support());
    bool dup = std::any_of(reps.begin(), reps.end(),
                           [&](const ReturnDistribution* r) { return approx_equal(*r, *d); });
    if (!dup) {
      reps.push_back(d);
      rep_action.push_back(static_cast<int>(a));
    }
  }

  LocalFront out;
  if (reps.size() == 1) {
    out.segments.push_back({lo, hi, rep_action[0]});
    return out;
  }

  Sweeper sw(reps, r_min, r_max, epsilon, opts);
  const double start = hi <= 0.0 ? hi : (lo >= 0.0 ? lo : 0.0);
  Probe first = sw.probe(start);
  const int start_action = first.best;

  std::vector<Change> down;
  std::vector<Change> up;
  if (start > lo) down = sw.sweep(first, lo);
  if (start < hi) up = sw.sweep(std::move(first), hi);

  // Ascending order: each downward change names the action below it, each
  // upward change the action above it.
  std::vector<double> bounds{lo};
  std::vector<int> acts;
  for (auto it = down.rbegin(); it != down.rend(); ++it) {
    acts.push_back(it->action);
    bounds.push_back(it->at);
  }
  acts.push_back(start_action);
  for (const Change& c : up) {
    bounds.push_back(c.at);
    acts.push_back(c.action);
  }
  bounds.push_back(hi);
  for (std::size_t i = 0; i < acts.size(); ++i) {
    out.segments.push_back({bounds[i], bounds[i + 1], rep_action[acts[i]]});
  }
  for (std::size_t i = 1; i + 1 < bounds.size(); ++i) out.breakpoints.push_back(bounds[i]);
  out.eval_count = sw.evals();
  return out;
}

LocalFront find_breaks(std::span<const ReturnDistribution> dists, double lo, double hi,
                       double epsilon, const FindBreaksOptions& opts) {
  std::vector<const ReturnDistribution*> ptrs;
  ptrs.reserve(dists.size());
  for (const ReturnDistribution& d : dists) ptrs.push_back(&d);
  return find_breaks(std::span<const ReturnDistribution* const>(ptrs), lo, hi, epsilon, opts);
}

}  // namespace riskfront
