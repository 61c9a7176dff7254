#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rbv/errors.hpp"
#include "rbv/radon.hpp"

#include <cmath>

using namespace rbv;

namespace {

BoundaryFunction lambda_fn(int dim, std::function<double(const VectorXd&)> f) {
  return BoundaryFunction{dim, std::move(f), std::nullopt, "test"};
}

BoundaryFunction sine1(double k) { return sine_product({k}, "sin"); }

// Independent oracle: trapezoid of |f''| with the analytic second derivative.
double tv2_oracle(double k, int grid) {
  const double h = 2.0 / (grid - 1);
  double sum = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double x = -1.0 + i * h;
    const double v = std::pow(2.0 * M_PI * k, 2) * std::abs(std::sin(2.0 * M_PI * k * x));
    sum += (i == 0 || i == grid - 1) ? 0.5 * v : v;
  }
  return sum * h;
}

}  // namespace

TEST_CASE("norm kind names round-trip") {
  for (NormKind k : kAllNormKinds) CHECK(parse_norm_kind(to_string(k)) == k);
  CHECK_THROWS_AS(parse_norm_kind("H1"), std::invalid_argument);
}

TEST_CASE("sine family members vanish at the origin") {
  const auto f = sine_product({1.0, 4.0 / 3.0, 2.0}, "f");
  CHECK(f(VectorXd::Zero(3)) == 0.0);
  CHECK(f.frequency_sum.value() == doctest::Approx(1.0 + 4.0 / 3.0 + 2.0));
  CHECK(scaled(f, -2.0).frequency_sum.value() == doctest::Approx(2.0 * (1.0 + 4.0 / 3.0 + 2.0)));
}

TEST_CASE("radon transform of simple functions") {
  Rng rng(1);
  const auto one = lambda_fn(2, [](const VectorXd&) { return 1.0; });
  VectorXd s(2);
  s << 0.0, 0.8;
  const RadonGrid g = radon_transform(one, {UnitVector::basis(2, 1), UnitVector::basis(2, 0)}, s, 2000, rng);
  CHECK(g.values(0, 0) == doctest::Approx(2.0).epsilon(0.01));
  CHECK(g.values(0, 1) == doctest::Approx(1.2).epsilon(0.02));
  CHECK(g.values(1, 1) == doctest::Approx(1.2).epsilon(0.02));

  const auto odd = lambda_fn(2, [](const VectorXd& x) { return x[0]; });
  VectorXd s3(3);
  s3 << -0.5, 0.1, 0.7;
  const RadonGrid h = radon_transform(odd, {UnitVector::basis(2, 1)}, s3, 20000, rng);
  for (int j = 0; j < 3; ++j) CHECK(std::abs(h.values(0, j)) < 0.02);

  const RadonGrid full = radon_transform(one, 4, 20, 500, rng);
  CHECK(full.values.rows() == 4);
  CHECK(full.offsets[0] == -1.0);
  CHECK(full.offsets[19] == 1.0);
  CHECK(full.values(0, 0) == 0.0);
  CHECK(full.values(2, 19) == 0.0);
  CHECK_THROWS_AS(radon_transform(sine1(1.0), 4, 20, 100, rng), std::invalid_argument);
}

TEST_CASE("ramp filter") {
  Rng rng(2);
  const int T = 257;
  RadonGrid g;
  g.directions = {UnitVector::basis(3, 0)};
  g.offsets = offset_grid(T);
  g.values.resize(1, T);
  for (int j = 0; j < T; ++j) g.values(0, j) = std::cos(M_PI * g.offsets[j]);

  SUBCASE("none is the identity") {
    const RadonGrid out = ramp_filter(g, 3, RampMode::None);
    CHECK(out.values == g.values);
  }
  SUBCASE("spectral acts as -d^2/ds^2 on cosines in d = 3") {
    const RadonGrid out = ramp_filter(g, 3, RampMode::Spectral);
    for (int j = T / 10; j < T - T / 10; ++j) {
      const double expect = M_PI * M_PI * g.values(0, j);
      CHECK(std::abs(out.values(0, j) - expect) <= 0.05 * M_PI * M_PI + 1e-9);
    }
  }
  SUBCASE("constant profile is annihilated") {
    g.values.setConstant(2.5);
    const RadonGrid out = ramp_filter(g, 3, RampMode::Spectral);
    CHECK(out.values.cwiseAbs().maxCoeff() < 1e-8);
  }
  CHECK_THROWS_AS(ramp_filter(g, 1, RampMode::None), std::invalid_argument);
  g.offsets = offset_grid(6);
  g.values.resize(1, 6);
  CHECK_THROWS_AS(ramp_filter(g, 3, RampMode::Spectral), std::invalid_argument);
}

TEST_CASE("second differences are exact on quadratics") {
  const int T = 11;
  const VectorXd s = offset_grid(T);
  MatrixXd v(1, T);
  for (int j = 0; j < T; ++j) v(0, j) = 3.0 * s[j] * s[j] - s[j];
  const MatrixXd d2 = second_difference(v, s[1] - s[0]);
  for (int j = 0; j < T; ++j) CHECK(d2(0, j) == doctest::Approx(6.0).epsilon(1e-9));
  CHECK(trapezoid(VectorXd::Constant(5, 2.0), 0.5) == doctest::Approx(4.0));
}

TEST_CASE("tv2_1d") {
  CHECK(tv2_1d(lambda_fn(1, [](const VectorXd& x) { return x[0]; }), 2001) == doctest::Approx(0.0).epsilon(1e-6));
  const double tv = tv2_1d(sine1(1.0), 2001);
  CHECK(std::abs(tv - 16.0 * M_PI) <= 0.5);
  CHECK(std::abs(tv - tv2_oracle(1.0, 20001)) <= 0.5);
  CHECK(std::abs(tv2_1d(sine1(2.0), 2001) - 64.0 * M_PI) <= 1.0);
  CHECK_THROWS_AS(tv2_1d(sine1(1.0), 15), std::invalid_argument);
  CHECK_THROWS_AS(tv2_1d(sine_product({1.0, 1.0}, "f"), 100), std::invalid_argument);
}

TEST_CASE("rtv2 estimate") {
  Rng rng(3);
  const RadonSettings settings;
  const auto zero = lambda_fn(2, [](const VectorXd&) { return 0.0; });
  CHECK(rtv2_estimate(zero, settings, rng) == 0.0);

  SUBCASE("constants see only the chord length") {
    // Profile 2 sqrt(1 - s^2) in every direction; the slice means are exact.
    const auto one = lambda_fn(2, [](const VectorXd&) { return 1.0; });
    const int T = settings.offsets;
    const double h = 2.0 / (T - 1);
    std::vector<double> p(static_cast<std::size_t>(T));
    for (int j = 0; j < T; ++j) {
      const double t = -1.0 + j * h;
      p[static_cast<std::size_t>(j)] = 2.0 * std::sqrt(std::max(0.0, 1.0 - t * t));
    }
    double integral = 0.0;
    for (int j = 0; j < T; ++j) {
      double d2;
      if (j == 0) {
        d2 = 2 * p[0] - 5 * p[1] + 4 * p[2] - p[3];
      } else if (j == T - 1) {
        d2 = 2 * p[T - 1] - 5 * p[T - 2] + 4 * p[T - 3] - p[T - 4];
      } else {
        d2 = p[j + 1] - 2 * p[j] + p[j - 1];
      }
      integral += (j == 0 || j == T - 1 ? 0.5 : 1.0) * std::abs(d2) / (h * h) * h;
    }
    const double expect = integral * 2.0 * M_PI / (2.0 * 2.0 * M_PI);
    CHECK(rtv2_estimate(one, settings, rng) == doctest::Approx(expect).epsilon(1e-9));
  }
  SUBCASE("one-dimensional pipeline matches tv2_1d") {
    RadonSettings line = settings;
    line.offsets = 201;
    for (double k : {1.0, 1.5, 2.0}) {
      const double a = rtv2_estimate(sine1(k), line, rng);
      const double b = tv2_1d(sine1(k), 2001);
      CHECK(std::abs(a - b) <= 0.15 * b);
    }
    const auto lin = lambda_fn(1, [](const VectorXd& x) { return 3.0 * x[0] - 1.0; });
    CHECK(rtv2_estimate(lin, line, rng) < 1e-9);
  }
  SUBCASE("deterministic per seed") {
    const auto f = sine_product({1.0, 1.2}, "f");
    Rng a(9), b(9);
    CHECK(rtv2_estimate(f, settings, a) == rtv2_estimate(f, settings, b));
  }
}

TEST_CASE("rbv2 norm") {
  NormSettings s;
  s.radon.offsets = 201;
  CHECK(std::abs(rbv2_norm(sine1(1.0), s) - 16.0 * M_PI) <= 0.5);
  const auto zero = lambda_fn(2, [](const VectorXd&) { return 0.0; });
  CHECK(rbv2_norm(zero, s) == 0.0);
  const double k15 = rbv2_norm(sine1(1.5), s);
  CHECK(k15 == doctest::Approx(tv2_1d(sine1(1.5), s.grid_1d) + std::abs(std::sin(3.0 * M_PI))).epsilon(1e-9));
  const auto bumped = lambda_fn(2, [](const VectorXd& x) { return 1.0 + 2.0 * x[0] + std::sin(x[1]); });
  const NormSettings defaults;
  Rng same(defaults.seed);
  const double tv = rtv2_estimate(bumped, defaults.radon, same);
  CHECK(rbv2_norm(bumped, defaults) == doctest::Approx(tv + 1.0 + 2.0 + std::sin(1.0)).epsilon(1e-12));
}

TEST_CASE("barron proxy") {
  CHECK(barron_norm_proxy(sine1(1.0)) == doctest::Approx(2.0 * M_PI));
  CHECK(barron_norm_proxy(sine_product({1.0, 1.0}, "f")) == doctest::Approx(4.0 * M_PI));
  CHECK(barron_norm_proxy(sine_product({2.0, 2.0, 2.0}, "f")) == doctest::Approx(12.0 * M_PI));
  CHECK_THROWS_AS(barron_norm_proxy(lambda_fn(1, [](const VectorXd&) { return 0.0; })), std::invalid_argument);
}

TEST_CASE("sup norms") {
  const SupNorms n = sup_norms(sine1(1.0), 2001);
  CHECK(std::abs(n.linf - 1.0) <= 0.01);
  CHECK(std::abs(n.l1 - 4.0 / M_PI) <= 0.02);
  CHECK(std::abs(n.c1 - 2.0 * M_PI) <= 0.05);
  const SupNorms two = sup_norms(sine_product({1.0, 1.0}, "f"), 64);
  CHECK(two.linf <= 1.0);
  CHECK(two.linf > 0.9);
  CHECK(two.c1 >= two.linf);
}

TEST_CASE("estimators are positively homogeneous") {
  const NormSettings s;
  const auto f = sine_product({1.2, 1.4}, "f");
  for (NormKind k : kAllNormKinds) {
    const double base = norm_value(f, k, s);
    CHECK(base >= 0.0);
    for (double lambda : {-2.0, 0.5, 3.0}) {
      CHECK(norm_value(scaled(f, lambda), k, s) == doctest::Approx(std::abs(lambda) * base).epsilon(1e-6));
    }
  }
}

TEST_CASE("normalization") {
  NormSettings s;
  s.radon.offsets = 201;
  const auto f = sine1(1.0);
  const auto g = normalize_boundary(f, NormKind::LInf, s);
  for (double x : {-0.9, -0.2, 0.25, 0.7}) CHECK(g.at_scalar(x) == doctest::Approx(f.at_scalar(x)).epsilon(1e-6));
  const auto r = normalize_boundary(f, NormKind::RBV2, s);
  CHECK(tv2_1d(r, s.grid_1d) + std::abs(r.at_scalar(1.0)) == doctest::Approx(1.0).epsilon(0.02));
  const auto f2 = sine_product({1.0, 1.4}, "f");
  for (NormKind k : kAllNormKinds) {
    const auto once = normalize_boundary(f2, k, s);
    CHECK(norm_value(once, k, s) == doctest::Approx(1.0).epsilon(1e-6));
  }
  CHECK_THROWS_AS(normalize_boundary(lambda_fn(1, [](const VectorXd&) { return 0.0; }), NormKind::LInf, s),
                  DegenerateFunctionError);
}
