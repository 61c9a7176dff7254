#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rbv/errors.hpp"
#include "rbv/geometry.hpp"

#include <cmath>

using namespace rbv;

TEST_CASE("unit vectors normalize and reject zero") {
  const UnitVector u(VectorXd::Constant(4, 3.0));
  CHECK(u.coords().norm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(UnitVector(VectorXd::Zero(3)), std::invalid_argument);
  CHECK(UnitVector::basis(3, 2)[2] == 1.0);
}

TEST_CASE("cylinder point offset range") {
  CHECK_NOTHROW(CylinderPoint(UnitVector::basis(2, 0), 1.0));
  CHECK_THROWS(CylinderPoint(UnitVector::basis(2, 0), 1.0 + 1e-9));
}

TEST_CASE("ball and sphere measures") {
  CHECK(unit_ball_volume(1) == doctest::Approx(2.0));
  CHECK(unit_ball_volume(2) == doctest::Approx(M_PI));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * M_PI / 3.0));
  CHECK(unit_sphere_area(1) == doctest::Approx(2.0));
  CHECK(unit_sphere_area(2) == doctest::Approx(2.0 * M_PI));
  CHECK(unit_sphere_area(3) == doctest::Approx(4.0 * M_PI));
}

TEST_CASE("sphere sampling") {
  Rng rng(7);
  SUBCASE("S^0 is {-1, 1}") {
    for (const auto& u : sample_unit_sphere(1, 2, rng)) CHECK(std::abs(u[0]) == 1.0);
  }
  SUBCASE("mean of many points is near the origin") {
    VectorXd mean = VectorXd::Zero(3);
    const auto pts = sample_unit_sphere(3, 10000, rng);
    for (const auto& u : pts) {
      CHECK(u.coords().norm() == doctest::Approx(1.0).epsilon(1e-12));
      mean += u.coords();
    }
    CHECK((mean / 10000.0).norm() < 0.05);
  }
  SUBCASE("deterministic per seed") {
    Rng a(3), b(3);
    const auto x = sample_unit_sphere(4, 20, a);
    const auto y = sample_unit_sphere(4, 20, b);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(x[i].coords() == y[i].coords());
  }
  CHECK_THROWS_AS(sample_unit_sphere(0, 3, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_unit_sphere(2, 0, rng), std::invalid_argument);
}

TEST_CASE("ball sampling") {
  Rng rng(11);
  const MatrixXd p = sample_unit_ball(2, 50000, rng);
  CHECK(p.colwise().norm().maxCoeff() <= 1.0);
  const double inner = (p.colwise().norm().array() <= 0.5).cast<double>().mean();
  CHECK(inner == doctest::Approx(0.25).epsilon(0.08));
  const MatrixXd q = sample_unit_ball(1, 1000, rng);
  CHECK(std::abs(q.mean()) <= 0.1);
}

TEST_CASE("lift to sphere") {
  const auto e1 = UnitVector::basis(3, 0);
  CHECK(lift_to_sphere({e1, 0.0}).v.isApprox(VectorXd::Unit(4, 0)));
  VectorXd up(4);
  up << M_SQRT1_2, 0, 0, M_SQRT1_2;
  CHECK((lift_to_sphere({e1, 1.0}).v - up).norm() < 1e-15);
  up[3] = -M_SQRT1_2;
  CHECK((lift_to_sphere({e1, -1.0}).v - up).norm() < 1e-15);

  Rng rng(5);
  std::uniform_real_distribution<double> b(-1.0, 1.0);
  for (const auto& w : sample_unit_sphere(3, 2000, rng)) {
    const CylinderPoint p(w, b(rng));
    const SpherePointLifted s = lift_to_sphere(p);
    CHECK(std::abs(s.v.norm() - 1.0) <= 1e-12);
    CHECK(std::abs(s.v[3]) <= M_SQRT1_2 + 1e-12);
    CHECK(s.weight_factor() >= 1.0);
    CHECK(s.weight_factor() <= std::sqrt(2.0) + 1e-12);
    const CylinderPoint back = unlift(s);
    CHECK((back.w.coords() - w.coords()).norm() < 1e-10);
    CHECK(std::abs(back.b - p.b) < 1e-10);
  }
}

TEST_CASE("orthonormal complement") {
  Rng rng(2);
  for (const auto& w : sample_unit_sphere(5, 50, rng)) {
    const MatrixXd q = orthonormal_complement(w);
    CHECK(q.cols() == 4);
    CHECK((q.transpose() * q - MatrixXd::Identity(4, 4)).norm() < 1e-12);
    CHECK((q.transpose() * w.coords()).norm() < 1e-12);
  }
}

TEST_CASE("hyperplane slices") {
  Rng rng(13);
  SUBCASE("axis aligned line") {
    const MatrixXd p = sample_hyperplane_slice(UnitVector::basis(2, 1), 0.0, 20000, rng);
    CHECK(p.row(1).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(p.row(0).cwiseAbs().maxCoeff() <= 1.0);
    CHECK(std::abs(p.row(0).mean()) <= 0.02);
  }
  SUBCASE("offset plane in 3d") {
    const MatrixXd p = sample_hyperplane_slice(UnitVector::basis(3, 2), 0.6, 5000, rng);
    CHECK((p.row(2).array() - 0.6).abs().maxCoeff() < 1e-10);
    CHECK(p.colwise().norm().maxCoeff() <= 1.0 + 1e-12);
  }
  SUBCASE("oblique direction") {
    const UnitVector w(VectorXd::LinSpaced(4, 1.0, 4.0));
    const MatrixXd p = sample_hyperplane_slice(w, -0.3, 2000, rng);
    CHECK(((w.coords().transpose() * p).array() + 0.3).abs().maxCoeff() < 1e-10);
    CHECK(p.colwise().norm().maxCoeff() <= 1.0 + 1e-12);
  }
  CHECK_THROWS_AS(sample_hyperplane_slice(UnitVector::basis(2, 0), 1.0, 10, rng), EmptySliceError);
}
