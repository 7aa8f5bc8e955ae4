#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "nlspike/prior.hpp"

namespace nlspike {

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;
  int iterations = 0;   // Krylov basis size used
  double residual = 0.0;  // ||A v - value v||
};

struct TopEigs {
  EigenPair first;
  EigenPair second;
};

/// Top two eigenpairs of a dense symmetric matrix by Lanczos with full
/// reorthogonalization; stops when both Ritz residuals fall below
/// tol * max(1, |lambda_1|) or the basis reaches max_basis. Eigenvector sign
/// convention: first entry with |v_i| > 1e-12 is positive.
TopEigs top_two(const Eigen::MatrixXd& a, double tol = 1e-8, int max_basis = 400,
                std::uint64_t seed = 0x5eedULL);

/// Subtracts the off-diagonal mean c from every entry (removes the rank-one
/// Perron component of positive-mean observation matrices). Returns c.
double perron_shift(Eigen::MatrixXd& a);

/// Flip the sign of v so that <v, 1> >= 0 (alignment convention used by the
/// denoised estimator and the AMP initialization).
void align_with_ones(Eigen::VectorXd& v);

/// Asymptotic top-eigenvalue location of the score matrix / sqrt(n):
/// m/delta + 1/m above the transition (delta < m^2), bulk edge 2/sqrt(delta)
/// otherwise. m is the 2kf-th prior moment.
double lambda1_prediction(double delta, double m2kf);

/// Asymptotic squared-overlap-root q0 = sqrt(max(0, 1 - delta/m^2)).
double q0_prediction(double delta, double m2kf);

/// Plain spectral estimate sqrt(n m2kf) v1 of the order-kf signal vector.
Eigen::VectorXd pca_estimate(const Eigen::VectorXd& v1, double m2kf);

/// Entrywise posterior-mean refinement of the spectral estimate: treats
/// sqrt(n) v1 as a Gaussian observation of x~pkf with overlap q0 and applies
/// the prior denoiser with tilt a = q0^2/(m2kf (1-q0^2)),
/// b_i = q0 sqrt(n) v1_i / ((1-q0^2) sqrt(m2kf)). v1 is ones-aligned first.
Eigen::VectorXd denoised_pca_estimate(const DiscretePrior& pkf, const Eigen::VectorXd& v1,
                                      double q0, double m2kf);

}  // namespace nlspike
