#pragma once

#include "rbv/geometry.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rbv {

enum class NormKind { LInf, L1, C1, Barron, RBV2 };

inline constexpr NormKind kAllNormKinds[] = {NormKind::LInf, NormKind::L1, NormKind::C1,
                                             NormKind::Barron, NormKind::RBV2};

std::string_view to_string(NormKind kind);
/// Accepts the names produced by to_string; throws std::invalid_argument otherwise.
NormKind parse_norm_kind(std::string_view name);

/// Real-valued function on B_1^dim with the metadata the norm suite needs.
struct BoundaryFunction {
  int dim = 1;
  std::function<double(const VectorXd&)> evaluate;
  /// |f| of the sine-product family; the Barron proxy is 2*pi times this.
  std::optional<double> frequency_sum;
  std::string id;

  double operator()(const VectorXd& x) const { return evaluate(x); }
  double at_scalar(double t) const;
};

/// x -> prod_j sin(2*pi*k_j*x_j), with |f| = sum_j |k_j|.
BoundaryFunction sine_product(std::vector<double> frequencies, std::string id);
/// x -> lambda * f(x); frequency_sum scales by |lambda|.
BoundaryFunction scaled(const BoundaryFunction& f, double lambda);

/// Samples of the Radon transform on a direction x offset grid.
struct RadonGrid {
  std::vector<UnitVector> directions;
  VectorXd offsets;
  MatrixXd values;  // directions.size() x offsets.size()

  Eigen::Index direction_count() const { return values.rows(); }
  Eigen::Index offset_count() const { return values.cols(); }
  double offset_step() const;
};

enum class RampMode { None, Spectral };

std::string_view to_string(RampMode mode);
RampMode parse_ramp_mode(std::string_view name);

struct RadonSettings {
  int directions = 20;
  int offsets = 20;
  int slice_samples = 2000;
  RampMode mode = RampMode::None;
};

struct NormSettings {
  RadonSettings radon;
  int grid_1d = 2001;
  int grid_per_axis = 64;
  std::uint64_t seed = 20240917;

  std::uint64_t hash() const;
};

/// Equispaced offsets on [-1, 1], endpoints included.
VectorXd offset_grid(int count);

/// Monte Carlo Radon transform of f (dim >= 2) on an explicit grid.
/// values(i, j) = vol(slice) * mean of f over uniform points of the slice;
/// slices with |s| = 1 have zero volume and are set to 0.
RadonGrid radon_transform(const BoundaryFunction& f, std::vector<UnitVector> directions,
                          const VectorXd& offsets, int slice_samples, Rng& rng);
/// Same with `direction_count` uniform random directions and `offset_count` offsets.
RadonGrid radon_transform(const BoundaryFunction& f, int direction_count,
                          int offset_count, int slice_samples, Rng& rng);

/// Exact Radon transform of a function on [-1, 1]: S^0 = {+1, -1}, slices are points.
RadonGrid radon_transform_line(const BoundaryFunction& f, int offset_count);

/// Lambda^{d-1} = (-d^2/ds^2)^{(d-1)/2} along each direction's offset profile.
/// Spectral mode uses the even extension of each profile, so no jump is introduced.
RadonGrid ramp_filter(const RadonGrid& g, int d, RampMode mode);

/// Second derivative in s, central inside and second-order one-sided at the ends.
MatrixXd second_difference(const MatrixXd& values, double step);

/// Composite trapezoid rule over an equispaced grid.
double trapezoid(const Eigen::Ref<const VectorXd>& samples, double step);

/// 1 / (2 (2 pi)^{d-1}).
double rtv2_prefactor(int d);

/// Second-order Radon-domain total variation. For dim >= 2 this is the MC
/// slice pipeline; for dim = 1 it runs on the exact S^0 transform, which makes
/// it an estimator of TV^2.
double rtv2_estimate(const BoundaryFunction& f, const RadonSettings& settings, Rng& rng);

/// int_{-1}^{1} |f''| by central differences and the trapezoid rule.
double tv2_1d(const BoundaryFunction& f, int grid);

double rbv2_norm(const BoundaryFunction& f, const NormSettings& settings);
double barron_norm_proxy(const BoundaryFunction& f);

struct SupNorms {
  double linf = 0.0;
  double l1 = 0.0;
  double c1 = 0.0;
};

SupNorms sup_norms(const BoundaryFunction& f, int grid_per_axis);

double norm_value(const BoundaryFunction& f, NormKind kind, const NormSettings& settings);

/// f / ||f||_kind; throws DegenerateFunctionError when the norm is below 1e-9.
BoundaryFunction normalize_boundary(const BoundaryFunction& f, NormKind kind,
                                    const NormSettings& settings);

}  // namespace rbv
