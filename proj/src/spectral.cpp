#include "nlspike/spectral.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "nlspike/rng.hpp"

namespace nlspike {

namespace {

void fix_sign(Eigen::VectorXd& v) {
  for (int i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-12) {
      if (v[i] < 0.0) v = -v;
      return;
    }
  }
}

}  // namespace

TopEigs top_two(const Eigen::MatrixXd& a, double tol, int max_basis, std::uint64_t seed) {
  const int n = static_cast<int>(a.rows());
  if (n < 2 || a.cols() != n) throw std::invalid_argument("top_two: need a square matrix, n >= 2");
  if (max_basis > n) max_basis = n;
  if (max_basis < 2) max_basis = 2;

  Rng rng(seed);
  std::vector<Eigen::VectorXd> basis;
  basis.reserve(max_basis);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.normal();
  v.normalize();
  basis.push_back(v);

  std::vector<double> alpha, beta;  // tridiagonal entries; beta[j] couples j and j+1
  Eigen::VectorXd w;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  int m = 0;
  Eigen::VectorXd ritz_vals;
  Eigen::MatrixXd ritz_vecs;

  auto solve_tridiag = [&]() {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < m) {
        t(i, i + 1) = beta[i];
        t(i + 1, i) = beta[i];
      }
    }
    es.compute(t);
    ritz_vals = es.eigenvalues();
    ritz_vecs = es.eigenvectors();
  };

  bool converged = false;
  double beta_next = 0.0;
  while (m < max_basis) {
    w = a * basis[m];
    if (m > 0) w -= beta[m - 1] * basis[m - 1];
    double al = basis[m].dot(w);
    alpha.push_back(al);
    w -= al * basis[m];
    // full reorthogonalization, two passes
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) w -= b.dot(w) * b;
    beta_next = w.norm();
    ++m;

    bool check = (m >= 2) && (m % 4 == 0 || m == max_basis || beta_next < 1e-14);
    if (check) {
      solve_tridiag();
      double scale = std::max(1.0, std::abs(ritz_vals[m - 1]));
      double r1 = std::abs(beta_next * ritz_vecs(m - 1, m - 1));
      double r2 = std::abs(beta_next * ritz_vecs(m - 1, m - 2));
      if ((r1 < tol * scale && r2 < tol * scale) || beta_next < 1e-14) {
        converged = true;
        break;
      }
    }
    if (m == max_basis) break;
    if (beta_next < 1e-14) {
      // lucky breakdown before two Ritz pairs: continue in a fresh direction
      Eigen::VectorXd f(n);
      for (int i = 0; i < n; ++i) f[i] = rng.normal();
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : basis) f -= b.dot(f) * b;
      double fn = f.norm();
      if (fn < 1e-12) break;  // whole space spanned
      basis.push_back(f / fn);
      beta.push_back(0.0);
    } else {
      basis.push_back(w / beta_next);
      beta.push_back(beta_next);
    }
  }
  if (!converged) solve_tridiag();
  if (m < 2) throw std::runtime_error("top_two: basis collapsed before two directions");

  auto assemble = [&](int col) {
    EigenPair p;
    p.value = ritz_vals[col];
    p.vector = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < m; ++j) p.vector += ritz_vecs(j, col) * basis[j];
    p.vector.normalize();
    fix_sign(p.vector);
    p.iterations = m;
    p.residual = (a * p.vector - p.value * p.vector).norm();
    return p;
  };

  TopEigs out;
  out.first = assemble(m - 1);
  out.second = assemble(m - 2);
  return out;
}

double perron_shift(Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  double sum = a.sum() - a.diagonal().sum();
  double c = sum / (static_cast<double>(n) * (n - 1));
  a.array() -= c;
  return c;
}

void align_with_ones(Eigen::VectorXd& v) {
  if (v.sum() < 0.0) v = -v;
}

double lambda1_prediction(double delta, double m2kf) {
  if (delta < m2kf * m2kf) return m2kf / delta + 1.0 / m2kf;
  return 2.0 / std::sqrt(delta);
}

double q0_prediction(double delta, double m2kf) {
  double q2 = 1.0 - delta / (m2kf * m2kf);
  return q2 > 0.0 ? std::sqrt(q2) : 0.0;
}

Eigen::VectorXd pca_estimate(const Eigen::VectorXd& v1, double m2kf) {
  return std::sqrt(static_cast<double>(v1.size()) * m2kf) * v1;
}

Eigen::VectorXd denoised_pca_estimate(const DiscretePrior& pkf, const Eigen::VectorXd& v1,
                                      double q0, double m2kf) {
  const int n = static_cast<int>(v1.size());
  Eigen::VectorXd v = v1;
  align_with_ones(v);
  if (q0 >= 1.0) throw std::invalid_argument("denoised_pca_estimate: q0 must be < 1");
  if (q0 < 0.0) q0 = 0.0;
  double one_minus = 1.0 - q0 * q0;
  double a = q0 * q0 / (m2kf * one_minus);
  double bscale = q0 * std::sqrt(static_cast<double>(n)) / (one_minus * std::sqrt(m2kf));
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) out[i] = denoise(pkf, a, bscale * v[i]);
  return out;
}

}  // namespace nlspike
