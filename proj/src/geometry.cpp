#include "rbv/geometry.hpp"

#include "rbv/errors.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rbv {

UnitVector::UnitVector(const VectorXd& v) {
  const double n = v.norm();
  if (v.size() == 0 || !(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("UnitVector: need a finite nonzero vector");
  }
  coords_ = v / n;
}

UnitVector UnitVector::basis(Eigen::Index d, Eigen::Index k) {
  if (k < 0 || k >= d) throw std::invalid_argument("UnitVector::basis: index out of range");
  return UnitVector(VectorXd::Unit(d, k));
}

CylinderPoint::CylinderPoint(UnitVector w_, double b_) : w(std::move(w_)), b(b_) {
  if (!(std::abs(b) <= 1.0)) {
    throw std::invalid_argument("CylinderPoint: offset must lie in [-1, 1], got " +
                                std::to_string(b));
  }
}

double SpherePointLifted::weight_factor() const {
  const double t = v[v.size() - 1];
  return 1.0 / std::sqrt(1.0 - t * t);
}

double unit_ball_volume(int d) {
  const double h = 0.5 * d;
  return std::pow(std::numbers::pi, h) / std::tgamma(h + 1.0);
}

double unit_sphere_area(int d) {
  return d * unit_ball_volume(d);
}

namespace {

void check_positive(int d, std::size_t n, const char* who) {
  if (d < 1 || n == 0) {
    throw std::invalid_argument(std::string(who) + ": need d >= 1 and n >= 1");
  }
}

VectorXd gaussian_direction(int d, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  VectorXd g(d);
  double n2 = 0.0;
  do {
    for (int i = 0; i < d; ++i) g[i] = normal(rng);
    n2 = g.squaredNorm();
  } while (n2 < 1e-300);
  return g / std::sqrt(n2);
}

// Uniform points in the k-ball of the given radius, radial-scaling law.
MatrixXd ball_points(int k, std::size_t n, double radius, Rng& rng) {
  MatrixXd out(k, static_cast<Eigen::Index>(n));
  if (k == 0) return out;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    const VectorXd dir = gaussian_direction(k, rng);
    const double r = radius * std::pow(unif(rng), 1.0 / k);
    out.col(static_cast<Eigen::Index>(j)) = r * dir;
  }
  return out;
}

}  // namespace

std::vector<UnitVector> sample_unit_sphere(int d, std::size_t n, Rng& rng) {
  check_positive(d, n, "sample_unit_sphere");
  std::vector<UnitVector> out;
  out.reserve(n);
  for (std::size_t j = 0; j < n; ++j) out.emplace_back(gaussian_direction(d, rng));
  return out;
}

MatrixXd sample_unit_ball(int d, std::size_t n, Rng& rng) {
  check_positive(d, n, "sample_unit_ball");
  return ball_points(d, n, 1.0, rng);
}

SpherePointLifted lift_to_sphere(const CylinderPoint& p) {
  const Eigen::Index d = p.w.dim();
  const double scale = 1.0 / std::sqrt(1.0 + p.b * p.b);
  SpherePointLifted out{VectorXd(d + 1)};
  out.v.head(d) = p.w.coords() * scale;
  out.v[d] = p.b * scale;
  return out;
}

CylinderPoint unlift(const SpherePointLifted& s) {
  const Eigen::Index d = s.dim();
  const double t = s.v[d];
  const double scale = 1.0 / std::sqrt(1.0 - t * t);
  return CylinderPoint(UnitVector(s.v.head(d) * scale), t * scale);
}

MatrixXd orthonormal_complement(const UnitVector& w) {
  const Eigen::Index d = w.dim();
  Eigen::Index skip = 0;
  w.coords().cwiseAbs().maxCoeff(&skip);

  MatrixXd basis(d, d - 1);
  Eigen::Index filled = 0;
  for (Eigen::Index k = 0; k < d; ++k) {
    if (k == skip) continue;
    VectorXd u = VectorXd::Unit(d, k);
    // Two passes keep the frame orthonormal to ~1e-16 even for nearly aligned w.
    for (int pass = 0; pass < 2; ++pass) {
      u -= w.coords().dot(u) * w.coords();
      for (Eigen::Index j = 0; j < filled; ++j) u -= basis.col(j).dot(u) * basis.col(j);
    }
    basis.col(filled++) = u.normalized();
  }
  return basis;
}

MatrixXd sample_hyperplane_slice(const UnitVector& w, double s, std::size_t n,
                                 Rng& rng) {
  if (!(std::abs(s) < 1.0)) {
    throw EmptySliceError("sample_hyperplane_slice: |s| >= 1 gives an empty slice");
  }
  const int d = static_cast<int>(w.dim());
  const double radius = std::sqrt(1.0 - s * s);
  const MatrixXd frame = orthonormal_complement(w);
  const MatrixXd local = ball_points(d - 1, n, radius, rng);
  MatrixXd out = frame * local;
  out.colwise() += s * w.coords();
  return out;
}

}  // namespace rbv
