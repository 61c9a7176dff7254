#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <random>
#include <vector>

namespace rbv {

using Rng = std::mt19937_64;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Point on S^{d-1}. Construction normalizes and rejects the zero vector.
class UnitVector {
 public:
  explicit UnitVector(const VectorXd& v);

  const VectorXd& coords() const { return coords_; }
  Eigen::Index dim() const { return coords_.size(); }
  double operator[](Eigen::Index i) const { return coords_[i]; }

  /// Canonical basis vector e_k (0-based k).
  static UnitVector basis(Eigen::Index d, Eigen::Index k);

 private:
  VectorXd coords_;
};

/// (w, b) in S^{d-1} x [-1, 1].
struct CylinderPoint {
  CylinderPoint(UnitVector w, double b);

  UnitVector w;
  double b;
};

/// phi(w, b) on S^d; last coordinate bounded by 1/sqrt(2).
struct SpherePointLifted {
  VectorXd v;

  Eigen::Index dim() const { return v.size() - 1; }
  /// h(v) = (1 - v_{d+1}^2)^{-1/2}, the change-of-variables density factor.
  double weight_factor() const;
};

double unit_ball_volume(int d);
/// Surface measure of S^{d-1} (so 2 for d = 1, 2*pi for d = 2).
double unit_sphere_area(int d);

std::vector<UnitVector> sample_unit_sphere(int d, std::size_t n, Rng& rng);
/// Uniform points in the closed unit ball, one per column.
MatrixXd sample_unit_ball(int d, std::size_t n, Rng& rng);

SpherePointLifted lift_to_sphere(const CylinderPoint& p);
/// Inverse of lift_to_sphere on its image.
CylinderPoint unlift(const SpherePointLifted& s);

/// Orthonormal basis of w-perp as columns of a d x (d-1) matrix.
/// Gram-Schmidt over e_1..e_d in fixed order, skipping the most w-aligned axis.
MatrixXd orthonormal_complement(const UnitVector& w);

/// Uniform points on {x : w.x = s} intersected with the unit ball, one per column.
/// Throws EmptySliceError when |s| >= 1.
MatrixXd sample_hyperplane_slice(const UnitVector& w, double s, std::size_t n,
                                 Rng& rng);

}  // namespace rbv
