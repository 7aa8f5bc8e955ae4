#include "nlspike/quadrature.hpp"

#include <stdexcept>

namespace nlspike {

GaussHermite GaussHermite::std_normal(int n_nodes) {
  if (n_nodes < 1) throw std::invalid_argument("GaussHermite: need at least one node");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n_nodes, n_nodes);
  for (int k = 1; k < n_nodes; ++k) {
    double b = std::sqrt(static_cast<double>(k));
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  if (es.info() != Eigen::Success) throw std::runtime_error("GaussHermite: eigensolver failed");
  GaussHermite gh;
  gh.nodes = es.eigenvalues();
  gh.weights.resize(n_nodes);
  for (int i = 0; i < n_nodes; ++i) {
    double first = es.eigenvectors()(0, i);
    gh.weights[i] = first * first;  // total mass of N(0,1) is 1
  }
  return gh;
}

}  // namespace nlspike
