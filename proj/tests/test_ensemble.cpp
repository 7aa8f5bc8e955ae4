#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "nlspike/ensemble.hpp"

using namespace nlspike;

TEST_CASE("critical coupling exponent") {
  CHECK(beta_critical(1) == doctest::Approx(0.0));
  CHECK(beta_critical(2) == doctest::Approx(0.25));
  CHECK(beta_critical(3) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("instances are symmetric and reproducible") {
  Channel ch = make_abs_gaussian(2.0);
  DiscretePrior prior = make_two_point_kf2();
  PlantedInstance a = make_instance(ch, prior, 60, 7);
  PlantedInstance b = make_instance(ch, prior, 60, 7);
  PlantedInstance c = make_instance(ch, prior, 60, 8);

  CHECK(a.n == 60);
  CHECK(a.beta == doctest::Approx(0.25));
  CHECK((a.y - a.y.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.x - b.x).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.y - b.y).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.y - c.y).cwiseAbs().maxCoeff() > 0.0);

  // explicit beta overrides the critical default
  PlantedInstance d = make_instance(ch, prior, 60, 7, 0.1);
  CHECK(d.beta == doctest::Approx(0.1));

  PlantedInstance nul = make_null_instance(ch, 60, 7);
  CHECK(nul.x.cwiseAbs().maxCoeff() == 0.0);
  CHECK(nul.y.minCoeff() >= 0.0);  // abs channel output
}

TEST_CASE("score matrix applies the channel entrywise") {
  Channel ch = make_abs_gaussian(1.5);
  PlantedInstance inst = make_instance(ch, make_two_point_kf2(), 25, 3);
  Eigen::MatrixXd s2 = score_matrix(inst, 2);
  CHECK((s2 - s2.transpose()).cwiseAbs().maxCoeff() == 0.0);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      CHECK(s2(i, j) == doctest::Approx(ch.score(inst.y(i, j), 2)).epsilon(1e-15));
}

TEST_CASE("matrix mse hand values") {
  Eigen::VectorXd x(3);
  x << 1.0, -2.0, 0.5;
  CHECK(matrix_mse(x, x) == doctest::Approx(0.0));
  CHECK(matrix_mse(x, -x) == doctest::Approx(0.0));  // sign-blind by construction
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(3);
  CHECK(matrix_mse(x, zero) == doctest::Approx(1.0));
  // orthogonal estimate with the same norm: ||xx^T - ee^T||^2 = 2||x||^4
  Eigen::VectorXd e(3);
  e << 2.0, 1.0, 0.0;
  e *= x.norm() / e.norm();
  CHECK(x.dot(e) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(matrix_mse(x, e) == doctest::Approx(2.0).epsilon(1e-12));

  CHECK(normalized_overlap(x, x) == doctest::Approx(1.0));
  CHECK(normalized_overlap(x, -x) == doctest::Approx(1.0));
  CHECK(normalized_overlap(x, e) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(normalized_overlap(x, zero) == 0.0);
}

TEST_CASE("binary save and load round trip") {
  Channel ch = make_abs_gaussian(2.3);
  PlantedInstance inst = make_instance(ch, make_two_point_kf2(), 40, 99);
  const std::string path = "ensemble_roundtrip.bin";
  save_instance(inst, path);
  PlantedInstance back = load_instance(path);

  CHECK(back.n == inst.n);
  CHECK(back.beta == inst.beta);
  CHECK(back.seed == inst.seed);
  CHECK(back.channel.name == inst.channel.name);
  REQUIRE(back.channel.params.count("gamma0") == 1);
  CHECK(back.channel.params.at("gamma0") == inst.channel.params.at("gamma0"));
  CHECK((back.x - inst.x).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.y - inst.y).cwiseAbs().maxCoeff() == 0.0);
  // the restored channel is functional
  CHECK(back.channel.score(0.9, 2) == doctest::Approx(ch.score(0.9, 2)).epsilon(1e-15));
  std::remove(path.c_str());
}

TEST_CASE("load rejects foreign files") {
  const std::string path = "ensemble_badmagic.bin";
  {
    std::ofstream out(path, std::ios::binary);
    out << "NOTAFILE and then some trailing bytes for good measure";
  }
  CHECK_THROWS(load_instance(path));
  std::remove(path.c_str());
  CHECK_THROWS(load_instance("no_such_file_anywhere.bin"));
}
