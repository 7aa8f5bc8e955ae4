#pragma once

#include <vector>

namespace nlspike {

/// Partial (incomplete) Bell polynomial B_{l,k}(x_1, ..., x_{l-k+1}),
/// evaluated by direct enumeration of the partitions of l into k parts.
/// x is 1-based implicitly: x[0] = x_1. Supports l <= 20.
double bell_partial(int l, int k, const std::vector<double>& x);

/// Complete Bell polynomial B_n(x_1, ..., x_n) via the binomial recurrence
/// B_{n+1} = sum_{i=0}^{n} C(n,i) B_{n-i} x_{i+1}, B_0 = 1.
double bell_complete(int n, const std::vector<double>& x);

/// Cumulants kappa_1..kappa_n from raw moments x_1..x_n via
/// kappa_k = x_k - sum_{i=1}^{k-1} C(k-1, i-1) kappa_i x_{k-i}.
std::vector<double> cumulants_from_moments(const std::vector<double>& x, int n);

/// k-th Taylor coefficient of the log-likelihood, g^{(k)}(y,0)/k!, given the
/// plain density-derivative ratios d_i = (d^i/dw^i p(y|w))|_{w=0} / p(y|0)
/// for i = 1..k: equals kappa_k(d)/k! by the log-of-series expansion
/// (equivalently sum_i (-1)^{i-1} (i-1)! B_{k,i}(d) / k!).
double score_from_density_derivatives(const std::vector<double>& d, int k);

}  // namespace nlspike
