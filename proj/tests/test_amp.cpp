#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "nlspike/amp.hpp"
#include "nlspike/asymptotics.hpp"
#include "nlspike/ensemble.hpp"
#include "nlspike/spectral.hpp"

using namespace nlspike;

namespace {
const GaussHermite& gh61() {
  static GaussHermite gh = GaussHermite::std_normal(61);
  return gh;
}
}  // namespace

TEST_CASE("spectral warm start scale and alignment") {
  Eigen::VectorXd v1 = -Eigen::VectorXd::Ones(64) / 8.0;
  double q0 = 0.7, m2 = 0.375;
  Eigen::VectorXd x0 = amp_spectral_init(v1, q0, m2);
  CHECK(x0.sum() > 0.0);  // ones-aligned despite the flipped input
  CHECK(x0.squaredNorm() == doctest::Approx(64 * m2 * q0 * q0).epsilon(1e-12));
}

TEST_CASE("reference trajectory is monotone from a warm start") {
  DiscretePrior rad = make_rademacher();
  std::vector<double> q = se_trajectory(rad, 0.25, 0.1, 12, gh61());
  REQUIRE(q.size() == 13);
  CHECK(q[0] == doctest::Approx(0.1));
  for (size_t t = 1; t < q.size(); ++t) CHECK(q[t] >= q[t - 1] - 1e-12);
  CHECK(q.back() == doctest::Approx(0.91651069724038614).epsilon(1e-4));
}

TEST_CASE("amp reaches the fixed point and tracks its reference") {
  // first-order channel at delta = 0.25: fixed point q = 0.9165
  Channel ch = make_gaussian_additive(0.25, 1);
  DiscretePrior prior = make_rademacher();
  DiscretePrior pkf = prior.pushforward(1);
  const int n = 1200;
  const double delta = 0.25;

  for (std::uint64_t seed : {3ULL, 5ULL}) {
    PlantedInstance inst = make_instance(ch, prior, n, seed);
    Eigen::MatrixXd a = score_matrix(inst, 1) / std::sqrt(static_cast<double>(n));
    TopEigs top = top_two(a);
    double q0 = q0_prediction(delta, 1.0);
    Eigen::VectorXd x0 = amp_spectral_init(top.first.vector, q0, 1.0);
    if (pkf.symmetric() && x0.dot(inst.x) < 0.0) x0 = -x0;

    AmpResult res = run_amp(a, inst.x, pkf, delta, x0);
    CHECK(res.converged);
    CHECK(res.iterations < 200);
    CHECK(std::abs(res.trajectory.back().q_emp - 0.91651069724038614) < 0.05);

    // the empirical overlap follows the deterministic recursion step by step
    std::vector<double> ref = se_trajectory(pkf, delta, 1.0 * q0 * q0, 10, gh61());
    double worst = 0.0;
    for (int t = 0; t <= 10 && t < static_cast<int>(res.trajectory.size()); ++t)
      worst = std::max(worst, std::abs(res.trajectory[t].q_emp - ref[t]));
    CHECK(worst <= 0.06);
  }
}

TEST_CASE("prior-free variant converges to the spectral overlap") {
  // delta = 1/3, m2 = 1: mu* = sqrt(1/delta - 1) = sqrt(2), q0 = sqrt(2/3)
  Channel ch = make_gaussian_additive(1.0 / 3.0, 1);
  DiscretePrior prior = make_rademacher();
  const int n = 1500;
  const double delta = 1.0 / 3.0;

  PlantedInstance inst = make_instance(ch, prior, n, 41);
  Eigen::MatrixXd a = score_matrix(inst, 1) / std::sqrt(static_cast<double>(n));
  TopEigs top = top_two(a);

  LinearAmpResult lin = run_linearized_amp(a, inst.x, delta, 1.0, top.first.vector);
  REQUIRE(!lin.mu.empty());

  // the deterministic mu recursion reaches its fixed point
  double mu = 1.0;
  for (int t = 0; t < 400; ++t) mu = 1.0 / (std::sqrt(delta) * std::sqrt(1.0 + 1.0 / (mu * mu)));
  CHECK(mu == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  CHECK(std::abs(lin.mu.back() - std::sqrt(2.0)) < 0.2);  // empirical mu is noisier

  double q0 = std::sqrt(2.0 / 3.0);
  CHECK(std::abs(lin.overlap.back() - q0) < 0.06);
}

TEST_CASE("below the transition amp stays finite and uninformative") {
  // third-order channel at gamma0 = 1.3 (below the onset near 1.52)
  double g0 = 1.3, nu = 4.1;
  Channel ch = make_student_f0(g0, nu);
  DiscretePrior prior = make_rademacher();
  DiscretePrior pkf = prior.pushforward(3);
  double delta = 9.0 * (3 + nu) / ((1 + nu) * std::pow(g0, 6));
  const int n = 600;

  PlantedInstance inst = make_instance(ch, prior, n, 13);
  Eigen::VectorXd target = inst.x.array().cube();
  Eigen::MatrixXd a = score_matrix(inst, 3) / std::sqrt(static_cast<double>(n));

  AmpOptions opts;
  opts.t_max = 50;
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
  AmpResult res = run_amp(a, target, pkf, delta, x0, opts);
  for (const AmpRow& row : res.trajectory) {
    CHECK(std::isfinite(row.q_emp));
    CHECK(std::isfinite(row.mse));
  }
  CHECK(std::abs(res.trajectory.back().q_emp) < 0.2);
}
