#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nlspike/quadrature.hpp"

using namespace nlspike;

TEST_CASE("weights form a probability measure") {
  for (int n : {5, 21, 61}) {
    GaussHermite gh = GaussHermite::std_normal(n);
    CHECK(gh.nodes.size() == n);
    CHECK(std::abs(gh.weights.sum() - 1.0) < 1e-13);
    // nodes sorted and symmetric
    for (int i = 1; i < n; ++i) CHECK(gh.nodes[i] > gh.nodes[i - 1]);
    CHECK(std::abs(gh.nodes[0] + gh.nodes[n - 1]) < 1e-10);
  }
}

TEST_CASE("gaussian moments are exact") {
  GaussHermite gh = GaussHermite::std_normal(61);
  CHECK(std::abs(gh.expect([](double x) { return x; })) < 1e-13);
  CHECK(std::abs(gh.expect([](double x) { return x * x; }) - 1.0) < 1e-12);
  CHECK(std::abs(gh.expect([](double x) { return std::pow(x, 4); }) - 3.0) < 1e-11);
  CHECK(std::abs(gh.expect([](double x) { return std::pow(x, 6); }) - 15.0) < 1e-10);
  // E[G^10] = 945, still polynomial-exact for a 61-node rule
  CHECK(std::abs(gh.expect([](double x) { return std::pow(x, 10); }) - 945.0) / 945.0 < 1e-12);
}

TEST_CASE("frozen nonlinear expectations") {
  GaussHermite gh = GaussHermite::std_normal(61);
  // E[tanh(1 + G)]: quadrature value frozen from an independent evaluation;
  // plain Monte Carlo (1e7 draws) gave 0.55034936 with s.e. 1.57e-4.
  double v1 = gh.expect([](double x) { return std::tanh(1.0 + x); });
  CHECK(v1 == doctest::Approx(0.5504004910).epsilon(1e-8));
  CHECK(std::abs(v1 - 0.55034936) < 4 * 1.57e-4);

  // E[tanh(3 + sqrt(3) G)]
  double v2 = gh.expect([](double x) { return std::tanh(3.0 + std::sqrt(3.0) * x); });
  CHECK(v2 == doctest::Approx(0.8756824045).epsilon(1e-8));
}

TEST_CASE("log-moment-generating identity") {
  GaussHermite gh = GaussHermite::std_normal(61);
  // E[e^{tG}] = e^{t^2/2}
  for (double t : {0.3, 1.0, 2.0}) {
    double v = gh.expect([&](double x) { return std::exp(t * x); });
    CHECK(v == doctest::Approx(std::exp(0.5 * t * t)).epsilon(1e-10));
  }
}
