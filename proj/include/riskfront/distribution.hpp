#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace riskfront {

struct Atom {
  double support;
  double prob;

  friend bool operator==(const Atom&, const Atom&) = default;
};

struct DistributionOptions {
  /// Atoms whose supports differ by at most this much are coalesced.
  double merge_tol = 1e-12;
  /// Atoms lighter than this are dropped and the rest renormalized. 0 keeps everything.
  double prob_floor = 0.0;
  /// Maximum number of atoms, 0 for unlimited. Excess atoms are projected onto
  /// an even grid between the extreme supports, preserving mass and mean.
  std::size_t max_atoms = 0;
};

/// Finitely supported distribution of a return, atoms sorted by support.
class ReturnDistribution {
 public:
  /// Point mass at zero.
  ReturnDistribution();

  static ReturnDistribution dirac(double c);

  /// Sorts, coalesces and validates. Throws std::invalid_argument on
  /// negative or non-finite entries or when the mass is not 1 within 1e-9.
  static ReturnDistribution from_atoms(std::vector<Atom> atoms,
                                       const DistributionOptions& opts = {});

  std::span<const Atom> atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  double min_support() const { return atoms_.front().support; }
  double max_support() const { return atoms_.back().support; }

  friend bool operator==(const ReturnDistribution&, const ReturnDistribution&) = default;

 private:
  friend struct DistributionBuilder;

  std::vector<Atom> atoms_;
};

/// Law of the sum of independent draws from a and b.
ReturnDistribution convolve(const ReturnDistribution& a, const ReturnDistribution& b,
                            const DistributionOptions& opts = {});

/// a + c.
ReturnDistribution shift(const ReturnDistribution& a, double c);

/// Probability-weighted union. Weights must be nonnegative and sum to 1 within 1e-9.
ReturnDistribution mixture(std::span<const double> weights,
                           std::span<const ReturnDistribution> dists,
                           const DistributionOptions& opts = {});

/// Same as mixture, with the components given by pointer. Null entries must carry zero weight.
ReturnDistribution mixture(std::span<const double> weights,
                           std::span<const ReturnDistribution* const> dists,
                           const DistributionOptions& opts = {});

/// P(X <= x).
double cdf(const ReturnDistribution& d, double x);
double mean(const ReturnDistribution& d);
/// inf{x : P(X <= x) >= alpha}, alpha in (0, 1].
double quantile(const ReturnDistribution& d, double alpha);

/// Kolmogorov distance sup_x |F_a(x) - F_b(x)|, treating supports within
/// merge_tol of each other as one point.
double sup_cdf_distance(const ReturnDistribution& a, const ReturnDistribution& b,
                        double merge_tol = 1e-12);

/// Same atom count, supports within merge_tol and probabilities within prob_tol.
bool approx_equal(const ReturnDistribution& a, const ReturnDistribution& b,
                  double prob_tol = 1e-12, double merge_tol = 1e-12);

}  // namespace riskfront
