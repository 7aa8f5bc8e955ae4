#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "nlspike/channel.hpp"
#include "nlspike/prior.hpp"

namespace nlspike {

/// Critical coupling exponent: with w_ij = n^{beta - 1/2} x_i x_j and first
/// informative order kf, beta = (1 - 1/kf)/2 keeps the order-kf spike at the
/// spectral scale.
inline double beta_critical(int kf) { return 0.5 * (1.0 - 1.0 / static_cast<double>(kf)); }

/// One sampled observation matrix with its hidden signal.
struct PlantedInstance {
  int n = 0;
  double beta = 0.0;
  std::uint64_t seed = 0;
  Eigen::VectorXd x;  // signal, x_i ~ prior
  Eigen::MatrixXd y;  // symmetric observation matrix (upper triangle sampled)
  Channel channel;
};

/// Samples x ~ prior^n and y_ij ~ p_out(.|n^{beta-1/2} x_i x_j) for i <= j,
/// mirrored. beta defaults to beta_critical(channel.kf) when negative.
PlantedInstance make_instance(const Channel& channel, const DiscretePrior& prior, int n,
                              std::uint64_t seed, double beta = -1.0);

/// Null instance: same pipeline with x = 0 (observations carry no signal).
PlantedInstance make_null_instance(const Channel& channel, int n, std::uint64_t seed);

/// Entrywise score matrix S_k, (S_k)_ij = score(y_ij, k). Symmetric.
Eigen::MatrixXd score_matrix(const PlantedInstance& inst, int k);

/// Matrix mean-square error of the rank-one estimate:
/// ||t t^T - e e^T||_F^2 / ||t t^T||_F^2 with t the target vector.
double matrix_mse(const Eigen::VectorXd& target, const Eigen::VectorXd& estimate);

/// |<a, b>| / (||a|| ||b||); zero when either vector vanishes.
double normalized_overlap(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Binary round-trip (little-endian): header, channel parameters, signal,
/// packed upper triangle of y in row-major order.
void save_instance(const PlantedInstance& inst, const std::string& path);
PlantedInstance load_instance(const std::string& path);

}  // namespace nlspike
