#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nlspike/prior.hpp"

using namespace nlspike;

TEST_CASE("rademacher moments and symmetry") {
  DiscretePrior p = make_rademacher();
  CHECK(p.moment(1) == doctest::Approx(0.0));
  CHECK(p.moment(2) == doctest::Approx(1.0));
  CHECK(p.moment(3) == doctest::Approx(0.0));
  CHECK(p.moment(4) == doctest::Approx(1.0));
  CHECK(p.symmetric());
  // odd pushforward keeps the law, even pushforward collapses to a point mass
  CHECK(p.pushforward(3).symmetric());
  CHECK(p.pushforward(3).atoms().size() == 2);
  CHECK(p.pushforward(2).atoms().size() == 1);
  CHECK(p.pushforward(2).moment(1) == doctest::Approx(1.0));
}

TEST_CASE("two-point first-order-blind prior") {
  DiscretePrior p = make_two_point_kf2();
  CHECK(p.atoms().size() == 2);
  // atoms sqrt(2 -+ sqrt 2)/2 with equal weights
  CHECK(p.moment(1) == doctest::Approx(-0.27059805007309845).epsilon(1e-13));
  CHECK(p.moment(2) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(p.moment(4) == doctest::Approx(0.375).epsilon(1e-13));
  CHECK_FALSE(p.symmetric());

  DiscretePrior p2 = p.pushforward(2);
  CHECK(p2.atoms()[0] == doctest::Approx(0.14644660940672624).epsilon(1e-13));
  CHECK(p2.atoms()[1] == doctest::Approx(0.8535533905932737).epsilon(1e-13));
  CHECK(p2.moment(1) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(p2.moment(2) == doctest::Approx(0.375).epsilon(1e-13));
}

TEST_CASE("construction normalizes and merges") {
  DiscretePrior p({2.0, 1.0, 1.0 + 1e-13}, {2.0, 1.0, 1.0});
  CHECK(p.atoms().size() == 2);
  CHECK(p.atoms()[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(p.weights()[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p.weights()[1] == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS(DiscretePrior({1.0}, {1.0, 2.0}));
  CHECK_THROWS(DiscretePrior({1.0}, {-1.0}));
  CHECK_THROWS(DiscretePrior({}, {}));
}

TEST_CASE("sampling matches the weights") {
  DiscretePrior p({-1.0, 0.5, 2.0}, {0.2, 0.5, 0.3});
  Rng rng(123);
  const int n = 200000;
  int counts[3] = {0, 0, 0};
  for (int i = 0; i < n; ++i) {
    double v = p.sample(rng);
    if (v < 0)
      ++counts[0];
    else if (v < 1)
      ++counts[1];
    else
      ++counts[2];
  }
  CHECK(std::abs(counts[0] / double(n) - 0.2) < 0.005);
  CHECK(std::abs(counts[1] / double(n) - 0.5) < 0.005);
  CHECK(std::abs(counts[2] / double(n) - 0.3) < 0.005);
}

TEST_CASE("denoiser closed form for rademacher") {
  DiscretePrior p = make_rademacher();
  for (double a : {0.0, 0.7, 3.0}) {
    for (double b : {-2.0, -0.3, 0.0, 0.4, 1.5}) {
      // the x^2 tilt is constant on +-1 atoms, so eta = tanh(b)
      CHECK(denoise(p, a, b) == doctest::Approx(std::tanh(b)).epsilon(1e-12));
      double sech2 = 1.0 - std::tanh(b) * std::tanh(b);
      CHECK(denoise_db(p, a, b) == doctest::Approx(sech2).epsilon(1e-10));
    }
  }
}

TEST_CASE("denoiser is stable at extreme tilts and bounded by the atoms") {
  DiscretePrior p = make_two_point_kf2().pushforward(2);
  double lo = p.atoms().front(), hi = p.atoms().back();
  for (double b : {-700.0, -50.0, 0.0, 50.0, 700.0}) {
    double v = denoise(p, 3.0, b);
    CHECK(std::isfinite(v));
    CHECK(v >= lo - 1e-12);
    CHECK(v <= hi + 1e-12);
    CHECK(denoise_db(p, 3.0, b) >= -1e-12);  // it is a variance
  }
  CHECK(denoise(p, 1.0, 700.0) == doctest::Approx(hi).epsilon(1e-12));
  CHECK(denoise(p, 1.0, -700.0) == doctest::Approx(lo).epsilon(1e-12));
}

TEST_CASE("denoise_db equals the b-derivative of denoise") {
  DiscretePrior p({-1.3, 0.2, 0.9}, {0.3, 0.3, 0.4});
  const double h = 1e-6;
  for (double a : {0.0, 1.1}) {
    for (double b : {-1.0, 0.0, 0.8, 2.5}) {
      double fd = (denoise(p, a, b + h) - denoise(p, a, b - h)) / (2 * h);
      CHECK(denoise_db(p, a, b) == doctest::Approx(fd).epsilon(1e-5));
    }
  }
}

TEST_CASE("denoise at zero tilt returns the prior mean") {
  DiscretePrior p = make_two_point_kf2().pushforward(2);
  CHECK(denoise(p, 0.0, 0.0) == doctest::Approx(p.mean()).epsilon(1e-13));
}
