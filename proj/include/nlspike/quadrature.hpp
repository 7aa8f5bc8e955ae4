#pragma once

#include <Eigen/Dense>

namespace nlspike {

/// Gauss-Hermite rule for expectations against the standard normal density,
/// i.e. sum_i w_i f(x_i) ~ E[f(G)], G ~ N(0,1), weights summing to one.
/// Nodes/weights come from the Golub-Welsch eigen-decomposition of the Jacobi
/// matrix of the probabilists' Hermite polynomials (off-diagonal sqrt(k)).
struct GaussHermite {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;

  static GaussHermite std_normal(int n_nodes);

  template <class F>
  double expect(F&& f) const {
    double acc = 0.0;
    for (int i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
    return acc;
  }
};

}  // namespace nlspike
