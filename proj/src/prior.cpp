#include "nlspike/prior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace nlspike {

DiscretePrior::DiscretePrior(std::vector<double> atoms, std::vector<double> weights) {
  if (atoms.empty() || atoms.size() != weights.size())
    throw std::invalid_argument("DiscretePrior: atoms/weights size mismatch");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("DiscretePrior: negative weight");
    total += w;
  }
  if (total <= 0.0) throw std::invalid_argument("DiscretePrior: zero total weight");

  std::vector<std::size_t> order(atoms.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return atoms[i] < atoms[j]; });

  for (std::size_t idx : order) {
    double a = atoms[idx];
    double w = weights[idx] / total;
    if (w == 0.0) continue;
    if (!atoms_.empty() && std::abs(a - atoms_.back()) <= kMergeTol) {
      // merge: weight-average the position so ties are order-independent
      double wt = weights_.back() + w;
      atoms_.back() = (atoms_.back() * weights_.back() + a * w) / wt;
      weights_.back() = wt;
    } else {
      atoms_.push_back(a);
      weights_.push_back(w);
    }
  }
  cum_.resize(weights_.size());
  std::partial_sum(weights_.begin(), weights_.end(), cum_.begin());
  cum_.back() = 1.0;
}

double DiscretePrior::moment(int k) const {
  double m = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) m += weights_[i] * std::pow(atoms_[i], k);
  return m;
}

DiscretePrior DiscretePrior::pushforward(int k) const {
  std::vector<double> a(atoms_.size());
  for (std::size_t i = 0; i < atoms_.size(); ++i) a[i] = std::pow(atoms_[i], k);
  return DiscretePrior(a, weights_);
}

bool DiscretePrior::symmetric(double tol) const {
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    std::size_t j = atoms_.size() - 1 - i;
    if (std::abs(atoms_[i] + atoms_[j]) > tol) return false;
    if (std::abs(weights_[i] - weights_[j]) > tol) return false;
  }
  return true;
}

double DiscretePrior::sample(Rng& rng) const {
  double u = rng.uniform();
  auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
  std::size_t idx = static_cast<std::size_t>(it - cum_.begin());
  if (idx >= atoms_.size()) idx = atoms_.size() - 1;
  return atoms_[idx];
}

DiscretePrior make_rademacher() { return DiscretePrior({-1.0, 1.0}, {0.5, 0.5}); }

DiscretePrior make_two_point_kf2() {
  double a = std::sqrt(2.0 - std::sqrt(2.0)) / 2.0;
  double b = -std::sqrt(2.0 + std::sqrt(2.0)) / 2.0;
  return DiscretePrior({a, b}, {0.5, 0.5});
}

namespace {

// Tilted weights in the log domain; returns (E[x], E[x^2]) under the tilt.
void tilted_moments(const DiscretePrior& p, double a, double b, double& m1, double& m2) {
  const auto& xs = p.atoms();
  const auto& ws = p.weights();
  double lmax = -std::numeric_limits<double>::infinity();
  std::vector<double> logits(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    logits[i] = std::log(ws[i]) - 0.5 * a * xs[i] * xs[i] + b * xs[i];
    lmax = std::max(lmax, logits[i]);
  }
  double z = 0.0, s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double w = std::exp(logits[i] - lmax);
    z += w;
    s1 += w * xs[i];
    s2 += w * xs[i] * xs[i];
  }
  m1 = s1 / z;
  m2 = s2 / z;
}

}  // namespace

double denoise(const DiscretePrior& p, double a, double b) {
  double m1, m2;
  tilted_moments(p, a, b, m1, m2);
  return m1;
}

double denoise_db(const DiscretePrior& p, double a, double b) {
  double m1, m2;
  tilted_moments(p, a, b, m1, m2);
  return m2 - m1 * m1;
}

}  // namespace nlspike
