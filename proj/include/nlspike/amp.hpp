#pragma once

#include <Eigen/Dense>
#include <vector>

#include "nlspike/prior.hpp"
#include "nlspike/quadrature.hpp"

namespace nlspike {

struct AmpOptions {
  int t_max = 200;
  double stop_tol = 1e-7;  // on ||x_{t+1} - x_t|| / sqrt(n)
  bool onsager = true;     // ablation hook for the memory-correction term
};

struct AmpRow {
  int t = 0;
  double overlap = 0.0;  // |<xhat, target>| / (||xhat|| ||target||)
  double mse = 0.0;      // rank-one matrix MSE against the target
  double q_emp = 0.0;    // <xhat, target> / n (state-evolution coordinate)
};

struct AmpResult {
  std::vector<AmpRow> trajectory;  // trajectory[t] describes iterate t (t=0 = init)
  Eigen::VectorXd xhat;
  int iterations = 0;
  bool converged = false;
};

/// Bayes-optimal AMP on the rescaled score matrix a = S_kf / sqrt(n) with
/// alpha = Delta_kf. Per step: q = <x_t,x_t>/(alpha n); Onsager coefficient
/// sum_i eta'(q, h_{t,i})/(alpha n) at the previous field (zero at t = 0);
/// h_{t+1} = a x_t - ons * x_{t-1}; x_{t+1} = eta(q, h_{t+1}).
/// target = the order-kf signal pushforward vector (for diagnostics only).
AmpResult run_amp(const Eigen::MatrixXd& a, const Eigen::VectorXd& target,
                  const DiscretePrior& pkf, double alpha, const Eigen::VectorXd& x0,
                  const AmpOptions& opts = {});

/// Spectral warm start: q0 sqrt(m2kf n) v1 with v1 ones-aligned, so that
/// <x0,x0>/n = m2kf q0^2 matches the state-evolution coordinate of the
/// spectral overlap.
Eigen::VectorXd amp_spectral_init(const Eigen::VectorXd& v1, double q0, double m2kf);

/// Deterministic reference trajectory: q_0 = q_init, q_{t+1} = SE(q_t).
std::vector<double> se_trajectory(const DiscretePrior& pkf, double delta, double q_init,
                                  int t_steps, const GaussHermite& gh);

/// Prior-free variant with the linear denoiser g_t(x) = x / sqrt(1 + mu_t^2),
/// mu_{t+1} = m2kf / (sqrt(delta) sqrt(1 + mu_t^{-2})), run from x0 = sqrt(n) v1,
/// mu_0 = 1. Converges to the spectral overlap q0 when delta < m2kf^2.
struct LinearAmpResult {
  std::vector<double> mu;       // mu_t trajectory
  std::vector<double> overlap;  // normalized overlap per iterate
  Eigen::VectorXd xhat;
  bool converged = false;
};
LinearAmpResult run_linearized_amp(const Eigen::MatrixXd& a, const Eigen::VectorXd& target,
                                   double delta, double m2kf, const Eigen::VectorXd& v1,
                                   const AmpOptions& opts = {});

}  // namespace nlspike
