#include "nlspike/bell.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>

namespace nlspike {

namespace {

constexpr int kMaxOrder = 20;  // 20! still exact in uint64

std::uint64_t factorial_u64(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Recursive enumeration of multiplicity vectors (m_1, m_2, ...) with
// sum j*m_j = l and sum m_j = k; each contributes the multinomial
// l! / (prod m_j! (j!)^{m_j}) times prod x_j^{m_j}.
void enumerate_partitions(int part, int weight_left, int parts_left, double coeff_inv,
                          double term, const std::vector<double>& x, double& acc) {
  if (parts_left == 0) {
    if (weight_left == 0) acc += term / coeff_inv;
    return;
  }
  if (weight_left < parts_left * part) return;  // remaining parts are all >= part
  int max_mult = weight_left / part;
  if (max_mult > parts_left) max_mult = parts_left;
  for (int m = 0; m <= max_mult; ++m) {
    double c = coeff_inv;
    double t = term;
    if (m > 0) {
      double jfact = static_cast<double>(factorial_u64(part));
      double p = 1.0;
      for (int i = 0; i < m; ++i) p *= jfact;
      c *= static_cast<double>(factorial_u64(m)) * p;
      double xv = (part - 1 < static_cast<int>(x.size())) ? x[part - 1] : 0.0;
      for (int i = 0; i < m; ++i) t *= xv;
    }
    enumerate_partitions(part + 1, weight_left - m * part, parts_left - m, c, t, x, acc);
  }
}

}  // namespace

double bell_partial(int l, int k, const std::vector<double>& x) {
  if (l < 0 || k < 0) throw std::invalid_argument("bell_partial: negative order");
  if (l > kMaxOrder) throw std::invalid_argument("bell_partial: order too large");
  if (k == 0) return l == 0 ? 1.0 : 0.0;
  if (k > l) return 0.0;
  if (static_cast<int>(x.size()) < l - k + 1)
    throw std::invalid_argument("bell_partial: need x_1..x_{l-k+1}");
  double acc = 0.0;
  enumerate_partitions(1, l, k, 1.0, static_cast<double>(factorial_u64(l)), x, acc);
  return acc;
}

double bell_complete(int n, const std::vector<double>& x) {
  if (n < 0 || n > kMaxOrder) throw std::invalid_argument("bell_complete: bad order");
  if (static_cast<int>(x.size()) < n) throw std::invalid_argument("bell_complete: need x_1..x_n");
  std::vector<double> b(n + 1);
  b[0] = 1.0;
  for (int m = 0; m < n; ++m) {
    double s = 0.0;
    for (int i = 0; i <= m; ++i) s += binomial(m, i) * b[m - i] * x[i];
    b[m + 1] = s;
  }
  return b[n];
}

std::vector<double> cumulants_from_moments(const std::vector<double>& x, int n) {
  if (n < 0 || n > kMaxOrder) throw std::invalid_argument("cumulants_from_moments: bad order");
  if (static_cast<int>(x.size()) < n)
    throw std::invalid_argument("cumulants_from_moments: need x_1..x_n");
  std::vector<double> kap(n);
  for (int k = 1; k <= n; ++k) {
    double s = x[k - 1];
    for (int i = 1; i < k; ++i) s -= binomial(k - 1, i - 1) * kap[i - 1] * x[k - i - 1];
    kap[k - 1] = s;
  }
  return kap;
}

double score_from_density_derivatives(const std::vector<double>& d, int k) {
  if (k < 1) throw std::invalid_argument("score_from_density_derivatives: k >= 1");
  if (static_cast<int>(d.size()) < k)
    throw std::invalid_argument("score_from_density_derivatives: need d_1..d_k");
  std::vector<double> kap = cumulants_from_moments(d, k);
  return kap[k - 1] / static_cast<double>(factorial_u64(k));
}

}  // namespace nlspike
