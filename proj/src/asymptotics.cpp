#include "nlspike/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nlspike {

double se_map(const DiscretePrior& pkf, double q, double delta, const GaussHermite& gh) {
  if (q < 0.0) q = 0.0;
  double r = q / delta;
  double sr = std::sqrt(r);
  const auto& xs = pkf.atoms();
  const auto& ws = pkf.weights();
  double acc = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double x = xs[i];
    acc += ws[i] * gh.expect([&](double g) { return denoise(pkf, r, r * x + sr * g) * x; });
  }
  return acc;
}

FixedPointResult se_fixed_point(const DiscretePrior& pkf, double delta, double q_init,
                                const GaussHermite& gh, double tol, int max_iter) {
  FixedPointResult res;
  double q = std::max(0.0, q_init);
  for (int t = 0; t < max_iter; ++t) {
    double qn = se_map(pkf, q, delta, gh);
    res.iterations = t + 1;
    if (std::abs(qn - q) < tol) {
      res.q = qn;
      res.converged = true;
      return res;
    }
    q = qn;
  }
  res.q = q;
  return res;
}

double replica_functional(const DiscretePrior& pkf, double q, double delta,
                          const GaussHermite& gh) {
  if (q < 0.0) q = 0.0;
  double r = q / delta;
  double sr = std::sqrt(r);
  const auto& xs = pkf.atoms();
  const auto& ws = pkf.weights();
  const std::size_t na = xs.size();
  std::vector<double> logw(na), logits(na);
  for (std::size_t i = 0; i < na; ++i) logw[i] = std::log(ws[i]);

  double outer = 0.0;
  for (std::size_t i = 0; i < na; ++i) {
    double x = xs[i];
    outer += ws[i] * gh.expect([&](double z) {
      double lmax = -std::numeric_limits<double>::infinity();
      for (std::size_t mi = 0; mi < na; ++mi) {
        double m = xs[mi];
        double l = logw[mi] + sr * z * m + r * x * m - 0.5 * r * m * m;
        if (l > lmax) lmax = l;
        logits[mi] = l;
      }
      double s = 0.0;
      for (std::size_t mi = 0; mi < na; ++mi) s += std::exp(logits[mi] - lmax);
      return lmax + std::log(s);
    });
  }
  return -q * q / (4.0 * delta) + outer;
}

ReplicaResult replica_maximizer(const DiscretePrior& pkf, double delta, const GaussHermite& gh,
                                int grid_points) {
  if (grid_points < 101) grid_points = 101;
  double q_hi = pkf.moment(2);
  std::vector<double> qs(grid_points), fs(grid_points);
  for (int i = 0; i < grid_points; ++i) {
    qs[i] = q_hi * static_cast<double>(i) / (grid_points - 1);
    fs[i] = replica_functional(pkf, qs[i], delta, gh);
  }

  auto golden = [&](double lo, double hi) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = replica_functional(pkf, c, delta, gh);
    double fd = replica_functional(pkf, d, delta, gh);
    while (b - a > 1e-12 * std::max(1.0, q_hi)) {
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - gr * (b - a);
        fc = replica_functional(pkf, c, delta, gh);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + gr * (b - a);
        fd = replica_functional(pkf, d, delta, gh);
      }
    }
    return 0.5 * (a + b);
  };

  ReplicaResult out;
  out.q_star = 0.0;
  out.f_star = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_points; ++i) {
    bool left_ok = (i == 0) || (fs[i] >= fs[i - 1]);
    bool right_ok = (i == grid_points - 1) || (fs[i] >= fs[i + 1]);
    if (!(left_ok && right_ok)) continue;
    double lo = qs[std::max(0, i - 1)];
    double hi = qs[std::min(grid_points - 1, i + 1)];
    double q = (lo < hi) ? golden(lo, hi) : qs[i];
    double f = replica_functional(pkf, q, delta, gh);
    // dedupe plateaus that refine to the same point
    bool dup = false;
    for (double prev : out.local_maxima)
      if (std::abs(prev - q) < 1e-8 * std::max(1.0, q_hi)) dup = true;
    if (!dup) out.local_maxima.push_back(q);
    if (f > out.f_star) {
      out.f_star = f;
      out.q_star = q;
    }
  }
  return out;
}

Prediction predict(const DiscretePrior& pkf, double delta, const GaussHermite& gh) {
  Prediction p;
  p.delta = delta;
  double m2 = pkf.moment(2);
  p.q0 = std::sqrt(std::max(0.0, 1.0 - delta / (m2 * m2)));
  p.q1 = se_map(pkf, m2 * p.q0 * p.q0, delta, gh);
  p.q_inf = se_fixed_point(pkf, delta, m2 * p.q0 * p.q0, gh).q;
  ReplicaResult rr = replica_maximizer(pkf, delta, gh);
  p.q_star = rr.q_star;
  p.n_local_maxima = static_cast<int>(rr.local_maxima.size());
  p.mmse = 1.0 - (p.q_star / m2) * (p.q_star / m2);
  p.pca_mse = 2.0 * (1.0 - p.q0 * p.q0);
  p.denoised_mse = 1.0 - (p.q1 / m2) * (p.q1 / m2);
  return p;
}

}  // namespace nlspike
