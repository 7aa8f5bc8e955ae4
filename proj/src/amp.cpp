#include "nlspike/amp.hpp"

#include <cmath>
#include <stdexcept>

#include "nlspike/asymptotics.hpp"
#include "nlspike/ensemble.hpp"
#include "nlspike/spectral.hpp"

namespace nlspike {

namespace {

AmpRow diagnostics(int t, const Eigen::VectorXd& xhat, const Eigen::VectorXd& target) {
  AmpRow row;
  row.t = t;
  row.overlap = normalized_overlap(xhat, target);
  row.mse = matrix_mse(target, xhat);
  row.q_emp = xhat.dot(target) / static_cast<double>(target.size());
  return row;
}

}  // namespace

AmpResult run_amp(const Eigen::MatrixXd& a, const Eigen::VectorXd& target,
                  const DiscretePrior& pkf, double alpha, const Eigen::VectorXd& x0,
                  const AmpOptions& opts) {
  const int n = static_cast<int>(a.rows());
  if (x0.size() != n || target.size() != n)
    throw std::invalid_argument("run_amp: dimension mismatch");
  if (alpha <= 0.0) throw std::invalid_argument("run_amp: alpha must be positive");
  const double alpha_n = alpha * static_cast<double>(n);
  const double sqrt_n = std::sqrt(static_cast<double>(n));

  AmpResult res;
  Eigen::VectorXd xhat = x0;
  Eigen::VectorXd xprev = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd h = Eigen::VectorXd::Zero(n);  // field that produced xhat (none at t=0)
  res.trajectory.push_back(diagnostics(0, xhat, target));

  for (int t = 0; t < opts.t_max; ++t) {
    double q_arg = xhat.squaredNorm() / alpha_n;
    double ons = 0.0;
    if (t > 0 && opts.onsager) {
      for (int i = 0; i < n; ++i) ons += denoise_db(pkf, q_arg, h[i]);
      ons /= alpha_n;
    }
    Eigen::VectorXd h_new = a * xhat - ons * xprev;
    Eigen::VectorXd x_new(n);
    for (int i = 0; i < n; ++i) x_new[i] = denoise(pkf, q_arg, h_new[i]);

    res.trajectory.push_back(diagnostics(t + 1, x_new, target));
    res.iterations = t + 1;
    double step = (x_new - xhat).norm() / sqrt_n;
    xprev = xhat;
    h = h_new;
    xhat = x_new;
    if (step < opts.stop_tol) {
      res.converged = true;
      break;
    }
  }
  res.xhat = xhat;
  return res;
}

Eigen::VectorXd amp_spectral_init(const Eigen::VectorXd& v1, double q0, double m2kf) {
  Eigen::VectorXd v = v1;
  align_with_ones(v);
  double scale = q0 * std::sqrt(m2kf * static_cast<double>(v.size()));
  return scale * v;
}

std::vector<double> se_trajectory(const DiscretePrior& pkf, double delta, double q_init,
                                  int t_steps, const GaussHermite& gh) {
  std::vector<double> q(t_steps + 1);
  q[0] = q_init;
  for (int t = 0; t < t_steps; ++t) q[t + 1] = se_map(pkf, q[t], delta, gh);
  return q;
}

LinearAmpResult run_linearized_amp(const Eigen::MatrixXd& a, const Eigen::VectorXd& target,
                                   double delta, double m2kf, const Eigen::VectorXd& v1,
                                   const AmpOptions& opts) {
  const int n = static_cast<int>(a.rows());
  if (v1.size() != n || target.size() != n)
    throw std::invalid_argument("run_linearized_amp: dimension mismatch");
  const double sqrt_n = std::sqrt(static_cast<double>(n));

  LinearAmpResult res;
  Eigen::VectorXd xhat = sqrt_n * v1;  // kept at ||xhat||^2 = n throughout
  Eigen::VectorXd xprev = Eigen::VectorXd::Zero(n);
  double lambda = 0.0;  // d xhat / d h scale of the latest normalization
  double mu = 1.0;
  res.mu.push_back(mu);
  res.overlap.push_back(normalized_overlap(xhat, target));

  for (int t = 0; t < opts.t_max; ++t) {
    double ons = (t > 0 && opts.onsager) ? lambda / delta : 0.0;
    Eigen::VectorXd h = a * xhat - ons * xprev;
    lambda = sqrt_n / h.norm();
    Eigen::VectorXd x_new = lambda * h;
    // deterministic SNR recursion alongside the iterates
    mu = m2kf / (std::sqrt(delta) * std::sqrt(1.0 + 1.0 / (mu * mu)));
    res.mu.push_back(mu);
    res.overlap.push_back(normalized_overlap(x_new, target));
    double step = (x_new - xhat).norm() / sqrt_n;
    xprev = xhat;
    xhat = x_new;
    if (step < opts.stop_tol) {
      res.converged = true;
      break;
    }
  }
  res.xhat = xhat;
  return res;
}

}  // namespace nlspike
