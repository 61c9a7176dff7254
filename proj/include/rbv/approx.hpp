#pragma once

#include "rbv/geometry.hpp"
#include "rbv/horizon.hpp"
#include "rbv/netcore.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace rbv {

struct Atom {
  CylinderPoint point;
  double weight;
};

/// Finite signed measure on S^{d-1} x [-1, 1].
struct DiscreteRadonMeasure {
  int d = 0;
  std::vector<Atom> atoms;

  /// ||mu|| = sum of |weight|.
  double total_variation() const;
  void validate() const;
};

/// x -> int relu(w.x - b) dmu(w, b) + c.x + c0.
struct IntegralRepFunction {
  DiscreteRadonMeasure measure;
  VectorXd c;
  double c0 = 0.0;

  int dim() const { return measure.d; }
  double operator()(const VectorXd& x) const;
};

double eval_integral_rep(const IntegralRepFunction& g, const VectorXd& x);

/// View as a BoundaryFunction (no frequency sum).
BoundaryFunction as_boundary(const IntegralRepFunction& g, std::string id);

/// ||mu|| + |g(0)| + sum_k |g(e_k) - g(0)|, an upper bound for ||g||_{RBV^2}.
double rbv2_bound(const IntegralRepFunction& g);

/// Random RBV^2 function: `atoms` atoms with w uniform on the sphere, b uniform
/// on [-1, 1], Gaussian weights rescaled to ||mu|| = total_variation, and an
/// affine part chosen so g(0) = 0 and |c_k| <= total_variation.
IntegralRepFunction random_integral_rep(int d, int atoms, double total_variation, Rng& rng);

struct ChangeOfVariablesSides {
  double lhs = 0.0;  // sum weight * |w.z - b|
  double rhs = 0.0;  // sum weight * h(v) * |v.(z, -1)|, v = lift(w, b)
};

ChangeOfVariablesSides change_of_variables_check(const DiscreteRadonMeasure& m,
                                                 const VectorXd& z);

struct JordanSplit {
  DiscreteRadonMeasure plus;
  DiscreteRadonMeasure minus;  // weights negated, so nonnegative
  double mass_plus = 0.0;
  double mass_minus = 0.0;
};

JordanSplit jordan_split(const DiscreteRadonMeasure& m);

/// Shallow network with at most `neurons` ReLUs approximating g: floor(N/4)
/// i.i.d. draws from each normalized Jordan component, each |.| term written
/// as relu(t) + relu(-t) with outer weight +-mass/(2r), the linear half of
/// relu = (t + |t|)/2 folded into the affine part. Unused units are zero.
ShallowNet subsample_to_shallow(const IntegralRepFunction& g, int neurons, Rng& rng);

using Evaluable = std::function<double(const VectorXd&)>;

/// max |f - g| over `probe_points` uniform points of B_1^d (a lower bound on the sup norm).
double sup_error(const Evaluable& f, const Evaluable& g, int probe_points, int d, Rng& rng);

/// Least-squares slope of log(err) against log(n).
double fit_rate(std::span<const double> ns, std::span<const double> errs);

/// Draws n points (one per column) from some probability measure.
using DomainSampler = std::function<MatrixXd(std::size_t, Rng&)>;

DomainSampler uniform_ball_sampler(int d);
/// Uniform on B_1^{d-1} x [-half_height, half_height], the last coordinate being the slab axis.
DomainSampler slab_sampler(int d, double half_height = 2.0);

/// P(1_{net(x) >= threshold} != h(x)) under the sampler.
double disagreement_measure(const HorizonClassifier& h_ref, const LayeredNet& net,
                            double threshold, int probes, const DomainSampler& sampler,
                            Rng& rng);

/// Tube {x : |x_i - f(x^[i])| <= epsilon} around the graph of f.
struct TubeQuery {
  TubeQuery(BoundaryFunction f, Eigen::Index axis, double epsilon);

  BoundaryFunction f;
  Eigen::Index axis;
  double epsilon;
};

/// Sampler probability of the tube.
double tube_mass(const TubeQuery& q, int probes, const DomainSampler& sampler, Rng& rng);

}  // namespace rbv
