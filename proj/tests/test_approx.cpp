#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rbv/approx.hpp"
#include "rbv/horizon.hpp"

#include <algorithm>
#include <cmath>

using namespace rbv;

namespace {

IntegralRepFunction single_atom(int d, double b, double weight) {
  IntegralRepFunction g;
  g.measure.d = d;
  g.measure.atoms.push_back({CylinderPoint(UnitVector::basis(d, 0), b), weight});
  g.c = VectorXd::Zero(d);
  return g;
}

BoundaryFunction constant(int dim, double value) {
  return BoundaryFunction{dim, [value](const VectorXd&) { return value; }, std::nullopt, "const"};
}

}  // namespace

TEST_CASE("integral representation evaluation") {
  const auto g = single_atom(3, 0.0, 1.0);
  CHECK(eval_integral_rep(g, Eigen::Vector3d(0.5, 0.0, 0.0)) == 0.5);

  IntegralRepFunction aff;
  aff.measure.d = 2;
  aff.c = Eigen::Vector2d(1.0, 0.0);
  aff.c0 = 1.0;
  CHECK(aff(Eigen::Vector2d(1.0, 0.0)) == 2.0);

  Rng rng(3);
  IntegralRepFunction r = random_integral_rep(3, 40, 2.0, rng);
  r.c0 = 0.0;
  double expect = 0.0;
  for (const auto& a : r.measure.atoms) expect += a.weight * relu(-a.point.b);
  CHECK(r(VectorXd::Zero(3)) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("random representations") {
  Rng rng(5);
  const auto g = random_integral_rep(4, 300, 1.5, rng);
  CHECK(g.measure.atoms.size() == 300);
  CHECK(g.measure.total_variation() == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(std::abs(g(VectorXd::Zero(4))) < 1e-12);
  CHECK(g.c.cwiseAbs().maxCoeff() <= 1.5);
  CHECK(rbv2_bound(g) >= g.measure.total_variation());
}

TEST_CASE("change of variables is exact on atoms") {
  Rng rng(21);
  const auto z_dirs = sample_unit_sphere(3, 100, rng);
  const auto one = single_atom(3, 0.4, -1.7);
  for (const auto& z : z_dirs) {
    const auto s = change_of_variables_check(one.measure, z.coords());
    CHECK(std::abs(s.lhs - s.rhs) < 1e-12);
  }
  const auto edge = single_atom(2, 1.0, 1.0);
  const auto e = change_of_variables_check(edge.measure, VectorXd::Unit(2, 0));
  CHECK(e.lhs == 0.0);
  CHECK(std::abs(e.rhs) < 1e-15);

  const auto many = random_integral_rep(4, 50, 3.0, rng);
  const VectorXd e2 = VectorXd::Unit(4, 1);
  double direct = 0.0;
  for (const auto& a : many.measure.atoms) direct += a.weight * std::abs(a.point.w[1] - a.point.b);
  const auto s = change_of_variables_check(many.measure, e2);
  CHECK(std::abs(s.lhs - direct) < 1e-12);
  CHECK(std::abs(s.lhs - s.rhs) < 1e-10);
}

TEST_CASE("jordan split") {
  Rng rng(2);
  DiscreteRadonMeasure m;
  m.d = 2;
  m.atoms.push_back({CylinderPoint(UnitVector::basis(2, 0), 0.1), 2.0});
  m.atoms.push_back({CylinderPoint(UnitVector::basis(2, 1), -0.5), -3.0});
  m.atoms.push_back({CylinderPoint(UnitVector::basis(2, 1), 0.5), 0.0});
  const auto j = jordan_split(m);
  CHECK(j.mass_plus == 2.0);
  CHECK(j.mass_minus == 3.0);
  CHECK(m.total_variation() == 5.0);
  CHECK(j.plus.atoms.size() == 1);
  CHECK(j.minus.atoms.size() == 1);
  CHECK(j.minus.atoms[0].weight == 3.0);

  const auto pos = jordan_split(random_integral_rep(3, 1, 1.0, rng).measure);
  CHECK(pos.mass_plus + pos.mass_minus == doctest::Approx(1.0));

  const auto g = random_integral_rep(3, 60, 1.0, rng);
  const auto s = jordan_split(g.measure);
  IntegralRepFunction plus{s.plus, VectorXd::Zero(3), 0.0};
  IntegralRepFunction minus{s.minus, VectorXd::Zero(3), 0.0};
  const MatrixXd xs = sample_unit_ball(3, 200, rng);
  for (Eigen::Index k = 0; k < xs.cols(); ++k) {
    const VectorXd x = xs.col(k);
    const double lin = g.c.dot(x) + g.c0;
    CHECK(std::abs(plus(x) - minus(x) + lin - g(x)) < 1e-12);
  }
}

TEST_CASE("subsampling to a shallow net") {
  Rng rng(31);
  SUBCASE("a single atom is reproduced exactly") {
    const auto g = single_atom(3, 0.2, 0.8);
    const ShallowNet f = subsample_to_shallow(g, 8, rng);
    CHECK(f.width() <= 8);
    const Evaluable gf = [&](const VectorXd& x) { return g(x); };
    const Evaluable ff = [&](const VectorXd& x) { return eval_shallow(f, x); };
    CHECK(sup_error(gf, ff, 10000, 3, rng) < 1e-10);
  }
  SUBCASE("affine only") {
    IntegralRepFunction g;
    g.measure.d = 2;
    g.c = Eigen::Vector2d(0.3, -1.2);
    g.c0 = 0.25;
    const ShallowNet f = subsample_to_shallow(g, 4, rng);
    for (const auto& x : {Eigen::Vector2d(0.1, 0.2), Eigen::Vector2d(-0.7, 0.4)}) {
      CHECK(eval_shallow(f, VectorXd(x)) == doctest::Approx(g(x)).epsilon(1e-14));
    }
  }
  SUBCASE("median error decreases with width") {
    const int d = 3;
    std::vector<double> medians;
    for (int n : {16, 64, 256}) {
      std::vector<double> errs;
      for (int t = 0; t < 20; ++t) {
        Rng mr(1000 + t);
        const auto g = random_integral_rep(d, 200, 1.0, mr);
        const ShallowNet f = subsample_to_shallow(g, n, mr);
        CHECK(f.width() <= n);
        CHECK(f.max_entry() <= 5.0 * rbv2_bound(g) + 1e-12);
        errs.push_back(sup_error([&](const VectorXd& x) { return g(x); },
                                 [&](const VectorXd& x) { return eval_shallow(f, x); }, 1000, d, mr));
      }
      std::nth_element(errs.begin(), errs.begin() + 10, errs.end());
      medians.push_back(errs[10]);
    }
    CHECK(medians[1] < medians[0]);
    CHECK(medians[2] < medians[1]);
  }
  CHECK_THROWS_AS(subsample_to_shallow(single_atom(2, 0.0, 1.0), 3, rng), std::invalid_argument);
}

TEST_CASE("sup error") {
  Rng rng(4);
  const Evaluable f = [](const VectorXd& x) { return std::sin(x[0]); };
  CHECK(sup_error(f, f, 1000, 2, rng) == 0.0);
  const Evaluable g = [&](const VectorXd& x) { return f(x) + 0.1; };
  CHECK(sup_error(f, g, 1000, 2, rng) == doctest::Approx(0.1).epsilon(1e-12));
  const Evaluable r = [](const VectorXd& x) { return relu(x[0]); };
  const Evaluable zero = [](const VectorXd&) { return 0.0; };
  CHECK(std::abs(sup_error(r, zero, 20000, 2, rng) - 1.0) <= 0.02);
}

TEST_CASE("fit rate") {
  const std::vector<double> ns{16, 64, 256, 1024};
  std::vector<double> a, b, c(4, 0.3);
  for (double n : ns) {
    a.push_back(1.0 / n);
    b.push_back(3.0 / std::sqrt(n));
  }
  CHECK(fit_rate(ns, a) == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(fit_rate(ns, b) == doctest::Approx(-0.5).epsilon(1e-9));
  CHECK(std::abs(fit_rate(ns, c)) < 1e-9);
  c[2] = 0.0;
  CHECK_THROWS_AS(fit_rate(ns, c), std::invalid_argument);
  CHECK_THROWS_AS(fit_rate(std::vector<double>{1, 2}, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST_CASE("samplers") {
  Rng rng(6);
  const MatrixXd slab = slab_sampler(3)(5000, rng);
  CHECK(slab.rows() == 3);
  CHECK(slab.topRows(2).colwise().norm().maxCoeff() <= 1.0);
  CHECK(slab.row(2).cwiseAbs().maxCoeff() <= 2.0);
  CHECK(uniform_ball_sampler(4)(100, rng).colwise().norm().maxCoeff() <= 1.0);
}

TEST_CASE("disagreement measure") {
  Rng rng(8);
  const auto zero_boundary = horizon_on_last_axis(constant(1, 0.0));
  const auto sampler = slab_sampler(2);

  const LayeredNet zero_net{{Layer{MatrixXd::Zero(1, 2), VectorXd::Zero(1)}}};
  const auto always = horizon_on_last_axis(constant(1, 5.0));
  CHECK(disagreement_measure(always, zero_net, 0.5, 2000, sampler, rng) == 1.0);

  const LayeredNet one_net{{Layer{MatrixXd::Zero(1, 2), VectorXd::Ones(1)}}};
  CHECK(std::abs(disagreement_measure(zero_boundary, one_net, 0.5, 20000, sampler, rng) - 0.5) <= 0.02);

  // The exact composition only errs inside the delta strip below the graph.
  const double delta = 1e-3;
  const LayeredNet exact = compose_horizon_net(ShallowNet::affine(VectorXd::Zero(1), 0.0), 1, delta);
  CHECK(disagreement_measure(zero_boundary, exact, 0.5, 20000, sampler, rng) <= 2e-3);
  CHECK_THROWS_AS(disagreement_measure(zero_boundary, exact, 0.5, 10, sampler, rng), std::invalid_argument);
}

TEST_CASE("tube mass") {
  Rng rng(10);
  const auto sampler = slab_sampler(2);
  const BoundaryFunction tilt{1, [](const VectorXd& x) { return 0.3 * x[0]; }, std::nullopt, "tilt"};
  const double wide = tube_mass(TubeQuery(tilt, 1, 0.4), 40000, sampler, rng);
  const double narrow = tube_mass(TubeQuery(tilt, 1, 0.2), 40000, sampler, rng);
  CHECK(narrow / wide == doctest::Approx(0.5).epsilon(0.1));
  CHECK(narrow <= wide);
  CHECK(tube_mass(TubeQuery(tilt, 1, 2.5), 2000, sampler, rng) == 1.0);
  CHECK(tube_mass(TubeQuery(tilt, 1, 1e-6), 20000, sampler, rng) < 1e-3);
  CHECK_THROWS_AS(TubeQuery(tilt, 1, 0.0), std::invalid_argument);
}
