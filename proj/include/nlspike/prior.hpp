#pragma once

#include <vector>

#include "nlspike/rng.hpp"

namespace nlspike {

/// Finitely supported prior: sorted atoms with matching (normalized) weights.
/// Atoms closer than the merge tolerance are combined on construction.
class DiscretePrior {
 public:
  static constexpr double kMergeTol = 1e-12;

  DiscretePrior(std::vector<double> atoms, std::vector<double> weights);

  const std::vector<double>& atoms() const { return atoms_; }
  const std::vector<double>& weights() const { return weights_; }

  double moment(int k) const;
  double mean() const { return moment(1); }

  /// Law of x^k when x follows this prior (atoms raised to k, re-merged).
  DiscretePrior pushforward(int k) const;

  /// True when the atom/weight set is invariant under x -> -x.
  bool symmetric(double tol = 1e-12) const;

  double sample(Rng& rng) const;

 private:
  std::vector<double> atoms_;
  std::vector<double> weights_;
  std::vector<double> cum_;  // cumulative weights for sampling
};

DiscretePrior make_rademacher();

/// Two-point prior with atoms sqrt(2-sqrt(2))/2 and -sqrt(2+sqrt(2))/2 at
/// equal weights: zero Fisher overlap at first order, E[x^2]=1/2, E[x^4]=3/8.
DiscretePrior make_two_point_kf2();

/// Posterior mean of x under prior p tilted by exp(-a x^2/2 + b x)
/// (computed in the log domain for stability).
double denoise(const DiscretePrior& p, double a, double b);

/// d/db of denoise: the variance of the tilted distribution.
double denoise_db(const DiscretePrior& p, double a, double b);

}  // namespace nlspike
