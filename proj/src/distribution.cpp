#include "riskfront/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>

namespace riskfront {

namespace {

constexpr double kMassTol = 1e-9;

// Merge runs of sorted atoms whose supports stay within tol of the first atom of the run.
void coalesce(std::vector<Atom>& atoms, double tol) {
  std::size_t out = 0;
  for (std::size_t i = 0; i < atoms.size();) {
    Atom group = atoms[i];
    std::size_t j = i + 1;
    while (j < atoms.size() && atoms[j].support - group.support <= tol) {
      group.prob += atoms[j].prob;
      ++j;
    }
    atoms[out++] = group;
    i = j;
  }
  atoms.resize(out);
}

void project_to_grid(std::vector<Atom>& atoms, std::size_t max_atoms) {
  if (max_atoms == 0 || atoms.size() <= max_atoms) return;
  const double lo = atoms.front().support;
  const double hi = atoms.back().support;
  if (max_atoms == 1) {
    double m = 0.0;
    for (const Atom& a : atoms) m += a.prob * a.support;
    atoms = {{m, 1.0}};
    return;
  }
  const double step = (hi - lo) / static_cast<double>(max_atoms - 1);
  std::vector<double> mass(max_atoms, 0.0);
  for (const Atom& a : atoms) {
    double pos = (a.support - lo) / step;
    auto k = static_cast<std::size_t>(std::floor(pos));
    if (k >= max_atoms - 1) {
      mass[max_atoms - 1] += a.prob;
      continue;
    }
    double w = pos - static_cast<double>(k);
    mass[k] += a.prob * (1.0 - w);
    mass[k + 1] += a.prob * w;
  }
  atoms.clear();
  for (std::size_t k = 0; k < max_atoms; ++k) {
    if (mass[k] > 0.0) atoms.push_back({lo + step * static_cast<double>(k), mass[k]});
  }
}

}  // namespace

struct DistributionBuilder {
  static ReturnDistribution finish(std::vector<Atom> atoms, const DistributionOptions& opts,
                                   bool sorted) {
    if (!sorted) {
      std::sort(atoms.begin(), atoms.end(),
                [](const Atom& a, const Atom& b) { return a.support < b.support; });
    }
    coalesce(atoms, opts.merge_tol);
    std::erase_if(atoms, [](const Atom& a) { return a.prob <= 0.0; });
    project_to_grid(atoms, opts.max_atoms);
    if (opts.prob_floor > 0.0) {
      std::erase_if(atoms, [&](const Atom& a) { return a.prob < opts.prob_floor; });
      if (atoms.empty()) throw std::invalid_argument("prob_floor removed every atom");
      double total = 0.0;
      for (const Atom& a : atoms) total += a.prob;
      for (Atom& a : atoms) a.prob /= total;
    }
    ReturnDistribution d;
    d.atoms_ = std::move(atoms);
    return d;
  }
};

ReturnDistribution::ReturnDistribution() : atoms_{{0.0, 1.0}} {}

ReturnDistribution ReturnDistribution::dirac(double c) {
  if (!std::isfinite(c)) throw std::invalid_argument("dirac: support must be finite");
  ReturnDistribution d;
  d.atoms_[0].support = c;
  return d;
}

ReturnDistribution ReturnDistribution::from_atoms(std::vector<Atom> atoms,
                                                  const DistributionOptions& opts) {
  if (atoms.empty()) throw std::invalid_argument("distribution needs at least one atom");
  double total = 0.0;
  for (const Atom& a : atoms) {
    if (!std::isfinite(a.support)) throw std::invalid_argument("non-finite support");
    if (!(a.prob >= 0.0) || !std::isfinite(a.prob)) {
      throw std::invalid_argument("negative or non-finite probability " + std::to_string(a.prob));
    }
    total += a.prob;
  }
  if (std::abs(total - 1.0) > kMassTol) {
    throw std::invalid_argument("probabilities sum to " + std::to_string(total));
  }
  return DistributionBuilder::finish(std::move(atoms), opts, false);
}

ReturnDistribution convolve(const ReturnDistribution& a, const ReturnDistribution& b,
                            const DistributionOptions& opts) {
  if (a.size() == 1) return shift(b, a.min_support());
  if (b.size() == 1) return shift(a, b.min_support());
  std::vector<Atom> out;
  out.reserve(a.size() * b.size());
  for (const Atom& x : a.atoms()) {
    for (const Atom& y : b.atoms()) out.push_back({x.support + y.support, x.prob * y.prob});
  }
  return DistributionBuilder::finish(std::move(out), opts, false);
}

ReturnDistribution shift(const ReturnDistribution& a, double c) {
  std::vector<Atom> out(a.atoms().begin(), a.atoms().end());
  for (Atom& x : out) x.support += c;
  // Shifting can bring neighbours within merge_tol only through rounding.
  return DistributionBuilder::finish(std::move(out), DistributionOptions{}, true);
}

ReturnDistribution mixture(std::span<const double> weights,
                           std::span<const ReturnDistribution* const> dists,
                           const DistributionOptions& opts) {
  if (weights.size() != dists.size()) {
    throw std::invalid_argument("mixture: weights and distributions differ in length");
  }
  double total = 0.0;
  std::size_t n_atoms = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0)) throw std::invalid_argument("mixture: negative weight");
    total += weights[i];
    if (weights[i] > 0.0) {
      if (dists[i] == nullptr) throw std::invalid_argument("mixture: missing component");
      n_atoms += dists[i]->size();
    }
  }
  if (std::abs(total - 1.0) > kMassTol) {
    throw std::invalid_argument("mixture: weights sum to " + std::to_string(total));
  }

  // k-way merge of the already sorted components.
  using Cursor = std::pair<std::size_t, std::size_t>;  // component, atom
  auto later = [&](const Cursor& l, const Cursor& r) {
    double ls = dists[l.first]->atoms()[l.second].support;
    double rs = dists[r.first]->atoms()[r.second].support;
    return ls > rs || (ls == rs && l.first > r.first);
  };
  std::priority_queue<Cursor, std::vector<Cursor>, decltype(later)> heap(later);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) heap.push({i, 0});
  }
  std::vector<Atom> out;
  out.reserve(n_atoms);
  while (!heap.empty()) {
    auto [i, k] = heap.top();
    heap.pop();
    const Atom& a = dists[i]->atoms()[k];
    out.push_back({a.support, weights[i] * a.prob});
    if (k + 1 < dists[i]->size()) heap.push({i, k + 1});
  }
  return DistributionBuilder::finish(std::move(out), opts, true);
}

ReturnDistribution mixture(std::span<const double> weights,
                           std::span<const ReturnDistribution> dists,
                           const DistributionOptions& opts) {
  std::vector<const ReturnDistribution*> ptrs;
  ptrs.reserve(dists.size());
  for (const ReturnDistribution& d : dists) ptrs.push_back(&d);
  return mixture(weights, std::span<const ReturnDistribution* const>(ptrs), opts);
}

double cdf(const ReturnDistribution& d, double x) {
  double acc = 0.0;
  for (const Atom& a : d.atoms()) {
    if (a.support > x) break;
    acc += a.prob;
  }
  return std::min(acc, 1.0);
}

double mean(const ReturnDistribution& d) {
  double m = 0.0;
  for (const Atom& a : d.atoms()) m += a.prob * a.support;
  return m;
}

double quantile(const ReturnDistribution& d, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("quantile: alpha outside (0,1]");
  // Accumulated mass carries rounding error; a 1e-12 slack keeps atoms
  // whose cumulative mass equals alpha exactly from being skipped.
  double acc = 0.0;
  for (const Atom& a : d.atoms()) {
    acc += a.prob;
    if (acc >= alpha - 1e-12) return a.support;
  }
  return d.max_support();
}

double sup_cdf_distance(const ReturnDistribution& a, const ReturnDistribution& b,
                        double merge_tol) {
  auto ia = a.atoms().begin();
  auto ib = b.atoms().begin();
  double fa = 0.0;
  double fb = 0.0;
  double dist = 0.0;
  while (ia != a.atoms().end() || ib != b.atoms().end()) {
    // Supports within merge_tol of the next one count as the same point.
    double x = std::min(ia != a.atoms().end() ? ia->support : INFINITY,
                        ib != b.atoms().end() ? ib->support : INFINITY) + merge_tol;
    while (ia != a.atoms().end() && ia->support <= x) fa += (ia++)->prob;
    while (ib != b.atoms().end() && ib->support <= x) fb += (ib++)->prob;
    dist = std::max(dist, std::abs(fa - fb));
  }
  return dist;
}

bool approx_equal(const ReturnDistribution& a, const ReturnDistribution& b, double prob_tol,
                  double merge_tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Atom& x = a.atoms()[i];
    const Atom& y = b.atoms()[i];
    if (std::abs(x.support - y.support) > merge_tol) return false;
    if (std::abs(x.prob - y.prob) > prob_tol) return false;
  }
  return true;
}

}  // namespace riskfront
