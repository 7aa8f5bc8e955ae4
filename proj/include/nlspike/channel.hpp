#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "nlspike/rng.hpp"

namespace nlspike {

/// Scalar observation model y ~ p_out(.|w) around w = 0, described by a
/// sampler plus the Taylor coefficients of the log-likelihood,
/// score(y, k) = g^{(k)}(y, 0)/k! (exact zero for orders the model kills,
/// and for orders above max_score_order).
struct Channel {
  std::string name;
  std::map<std::string, double> params;  // serialized with instances

  int kf = 0;                 // first informative order (analytic)
  int max_score_order = 0;    // highest k with a tabulated score

  std::function<double(double w, Rng& rng)> sample;
  std::function<double(double y, int k)> score;

  /// Closed-form 1/Delta_k = E_null[score(y,k)^2]; NaN when not tabulated.
  std::function<double(int k)> inv_delta;
};

/// y = w^kf / sqrt(delta_eff) + xi, xi ~ N(0,1), with the gamma0 family
/// delta_eff = delta / gamma0^(2 kf) so that 1/Delta scales like the
/// nonlinear channels' gamma0^(2 kf); gamma0 = 1 reproduces delta exactly.
Channel make_gaussian_additive(double delta, int kf, double gamma0 = 1.0);

/// y = |gamma0 * w + xi|, xi ~ N(0,1): sign-blind readout, first informative
/// order 2 with score gamma0^2 (y^2 - 1)/2 and 1/Delta_2 = gamma0^4/2.
Channel make_abs_gaussian(double gamma0);

/// y = z + f0(gamma0 * w), z ~ Student-t(nu), f0(u) = u - tanh(u) + (2/15)u^5
/// = u^3/3 + O(u^7): first informative order 3,
/// score_3 = gamma0^3 (1+nu) y / (3 (y^2 + nu)),
/// 1/Delta_3 = gamma0^6 (1+nu) / (9 (3+nu)).
Channel make_student_f0(double gamma0, double nu = 4.1);

/// Channel factory by name (used when loading serialized instances).
Channel make_channel(const std::string& name, const std::map<std::string, double>& params);

/// Monte-Carlo estimate of the Fisher coefficients 1/Delta_k under the null.
struct FisherScan {
  std::vector<double> inv_delta;  // index k-1
  std::vector<double> stderr_;    // standard error of each estimate
  int k_f = 0;                    // first k whose estimate clears the threshold (0 = none)
};

/// Estimates 1/Delta_k for k = 1..k_max with n_samples null draws; k_f is the
/// first k with estimate > max(abs_tol, 5 * stderr).
FisherScan scan_fisher_coefficients(const Channel& ch, int k_max, long n_samples,
                                    std::uint64_t seed, double abs_tol = 1e-4);

}  // namespace nlspike
