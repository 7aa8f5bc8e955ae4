#pragma once

#include <vector>

#include "nlspike/prior.hpp"
#include "nlspike/quadrature.hpp"

namespace nlspike {

/// One step of the overlap recursion for the effective Gaussian channel with
/// noise delta and signal prior pkf (the order-kf pushforward):
/// SE(q) = E_{x,G}[ eta(q/delta, (q/delta) x + sqrt(q/delta) G) x ].
double se_map(const DiscretePrior& pkf, double q, double delta, const GaussHermite& gh);

struct FixedPointResult {
  double q = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Iterates se_map from q_init until |q_{t+1}-q_t| < tol (default 1e-10) or
/// max_iter steps.
FixedPointResult se_fixed_point(const DiscretePrior& pkf, double delta, double q_init,
                                const GaussHermite& gh, double tol = 1e-10,
                                int max_iter = 10000);

/// Scalar free-entropy-style potential whose stationary points are the SE
/// fixed points: F(q) = -q^2/(4 delta) + E_{x,z} log sum_m w_m
/// exp( sqrt(q/delta) z m + (q/delta) x m - q m^2/(2 delta) ).
/// Satisfies dF/dq = (SE(q) - q)/(2 delta).
double replica_functional(const DiscretePrior& pkf, double q, double delta,
                          const GaussHermite& gh);

struct ReplicaResult {
  double q_star = 0.0;
  double f_star = 0.0;
  std::vector<double> local_maxima;  // interior/boundary maxima of F on [0, m2]
};

/// Global maximizer of the potential on [0, m2(pkf)]: coarse grid (>= 101
/// points) then golden-section refinement around every local maximum.
ReplicaResult replica_maximizer(const DiscretePrior& pkf, double delta, const GaussHermite& gh,
                                int grid_points = 501);

/// Everything the theory predicts at one noise level.
struct Prediction {
  double delta = 0.0;
  double q0 = 0.0;            // spectral overlap
  double q1 = 0.0;            // one-step-denoised overlap, SE(m2kf q0^2)
  double q_inf = 0.0;         // SE fixed point from the spectral overlap
  double q_star = 0.0;        // replica maximizer
  double mmse = 0.0;          // 1 - (q_star/m2kf)^2
  double pca_mse = 0.0;       // 2 (1 - q0^2)
  double denoised_mse = 0.0;  // 1 - (q1/m2kf)^2
  int n_local_maxima = 1;
};

/// pkf must be prior.pushforward(kf); delta the Fisher noise 1/(1/Delta_kf).
Prediction predict(const DiscretePrior& pkf, double delta, const GaussHermite& gh);

}  // namespace nlspike
