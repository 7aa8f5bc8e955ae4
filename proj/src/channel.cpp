#include "nlspike/channel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace nlspike {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

Channel make_gaussian_additive(double delta, int kf, double gamma0) {
  if (delta <= 0.0) throw std::invalid_argument("gaussian_additive: delta must be positive");
  if (kf < 1) throw std::invalid_argument("gaussian_additive: kf must be >= 1");
  double delta_eff = delta / std::pow(gamma0, 2 * kf);
  double root = 1.0 / std::sqrt(delta_eff);

  Channel ch;
  ch.name = "gaussian_additive";
  ch.params = {{"delta", delta}, {"kf", static_cast<double>(kf)}, {"gamma0", gamma0}};
  ch.kf = kf;
  ch.max_score_order = 2 * kf;
  ch.sample = [root, kf](double w, Rng& rng) {
    return std::pow(w, kf) * root + rng.normal();
  };
  // g(y,w) = -(y - w^kf/sqrt(d))^2/2 + const: only two nonzero coefficients.
  ch.score = [root, kf, delta_eff](double y, int k) {
    if (k == kf) return y * root;
    if (k == 2 * kf) return -0.5 / delta_eff;
    return 0.0;
  };
  ch.inv_delta = [kf, delta_eff](int k) {
    if (k == kf) return 1.0 / delta_eff;
    if (k < 2 * kf) return 0.0;  // scores below 2kf (other than kf) vanish identically
    return kNaN;
  };
  return ch;
}

Channel make_abs_gaussian(double gamma0) {
  if (gamma0 <= 0.0) throw std::invalid_argument("abs_gaussian: gamma0 must be positive");
  double g2 = gamma0 * gamma0;
  double g4 = g2 * g2;

  Channel ch;
  ch.name = "abs_gaussian";
  ch.params = {{"gamma0", gamma0}};
  ch.kf = 2;
  ch.max_score_order = 4;
  ch.sample = [gamma0](double w, Rng& rng) { return std::abs(gamma0 * w + rng.normal()); };
  // g(y,w) = -u^2/2 + log cosh(y u) + const, u = gamma0 w:
  //   w^2 coefficient  gamma0^2 (y^2 - 1)/2,
  //   w^4 coefficient -gamma0^4 y^4/12 (odd orders vanish).
  ch.score = [g2, g4](double y, int k) {
    if (k == 2) return 0.5 * g2 * (y * y - 1.0);
    if (k == 4) {
      double y2 = y * y;
      return -g4 * y2 * y2 / 12.0;
    }
    return 0.0;
  };
  ch.inv_delta = [g4](int k) {
    if (k == 2) return 0.5 * g4;
    if (k < 4) return 0.0;
    return kNaN;
  };
  return ch;
}

Channel make_student_f0(double gamma0, double nu) {
  if (gamma0 <= 0.0) throw std::invalid_argument("student_f0: gamma0 must be positive");
  if (nu <= 2.0) throw std::invalid_argument("student_f0: nu must exceed 2");
  double g3 = gamma0 * gamma0 * gamma0;
  double g6 = g3 * g3;

  Channel ch;
  ch.name = "student_f0";
  ch.params = {{"gamma0", gamma0}, {"nu", nu}};
  ch.kf = 3;
  ch.max_score_order = 6;
  ch.sample = [gamma0, nu](double w, Rng& rng) {
    double u = gamma0 * w;
    double u2 = u * u;
    double f0 = u - std::tanh(u) + (2.0 / 15.0) * u2 * u2 * u;
    return rng.student_t(nu) + f0;
  };
  // f0(u) = u^3/3 + O(u^7), so g(y,w) = log p_z(y - f0(gamma0 w)) expands as
  //   w^3: -gamma0^3/3 * (log p_z)'(y)  =  gamma0^3 (1+nu) y / (3 (y^2+nu)),
  //   w^6:  gamma0^6/18 * (log p_z)''(y) = -gamma0^6 (1+nu)(nu - y^2)/(18 (nu+y^2)^2),
  // with orders 1, 2, 4, 5 identically zero.
  ch.score = [g3, g6, nu](double y, int k) {
    double y2 = y * y;
    double den = y2 + nu;
    if (k == 3) return g3 * (1.0 + nu) * y / (3.0 * den);
    if (k == 6) return -g6 * (1.0 + nu) * (nu - y2) / (18.0 * den * den);
    return 0.0;
  };
  ch.inv_delta = [g6, nu](int k) {
    if (k == 3) return g6 * (1.0 + nu) / (9.0 * (3.0 + nu));
    if (k < 6) return 0.0;
    return kNaN;
  };
  return ch;
}

Channel make_channel(const std::string& name, const std::map<std::string, double>& params) {
  auto get = [&](const std::string& key, double fallback, bool required) {
    auto it = params.find(key);
    if (it != params.end()) return it->second;
    if (required) throw std::invalid_argument("make_channel: missing parameter " + key);
    return fallback;
  };
  if (name == "gaussian_additive")
    return make_gaussian_additive(get("delta", 0, true),
                                  static_cast<int>(get("kf", 0, true)),
                                  get("gamma0", 1.0, false));
  if (name == "abs_gaussian") return make_abs_gaussian(get("gamma0", 0, true));
  if (name == "student_f0")
    return make_student_f0(get("gamma0", 0, true), get("nu", 4.1, false));
  throw std::invalid_argument("make_channel: unknown channel " + name);
}

FisherScan scan_fisher_coefficients(const Channel& ch, int k_max, long n_samples,
                                    std::uint64_t seed, double abs_tol) {
  if (k_max < 1 || n_samples < 2) throw std::invalid_argument("scan_fisher_coefficients: bad args");
  Rng rng(seed);
  std::vector<double> sum(k_max, 0.0), sumsq(k_max, 0.0);
  for (long s = 0; s < n_samples; ++s) {
    double y = ch.sample(0.0, rng);
    for (int k = 1; k <= k_max; ++k) {
      double v = ch.score(y, k);
      double v2 = v * v;
      sum[k - 1] += v2;
      sumsq[k - 1] += v2 * v2;
    }
  }
  FisherScan out;
  out.inv_delta.resize(k_max);
  out.stderr_.resize(k_max);
  for (int k = 1; k <= k_max; ++k) {
    double mean = sum[k - 1] / n_samples;
    double var = sumsq[k - 1] / n_samples - mean * mean;
    if (var < 0.0) var = 0.0;
    out.inv_delta[k - 1] = mean;
    out.stderr_[k - 1] = std::sqrt(var / n_samples);
    if (out.k_f == 0 && mean > std::max(abs_tol, 5.0 * out.stderr_[k - 1])) out.k_f = k;
  }
  return out;
}

}  // namespace nlspike
