#include "rbv/approx.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rbv {

double DiscreteRadonMeasure::total_variation() const {
  double tv = 0.0;
  for (const auto& a : atoms) tv += std::abs(a.weight);
  return tv;
}

void DiscreteRadonMeasure::validate() const {
  for (const auto& a : atoms) {
    if (a.point.w.dim() != d) throw std::invalid_argument("DiscreteRadonMeasure: atom dimension mismatch");
    if (!std::isfinite(a.weight)) throw std::invalid_argument("DiscreteRadonMeasure: non-finite weight");
  }
}

double IntegralRepFunction::operator()(const VectorXd& x) const {
  return eval_integral_rep(*this, x);
}

double eval_integral_rep(const IntegralRepFunction& g, const VectorXd& x) {
  double out = g.c.dot(x) + g.c0;
  for (const auto& a : g.measure.atoms) {
    out += a.weight * relu(a.point.w.coords().dot(x) - a.point.b);
  }
  return out;
}

BoundaryFunction as_boundary(const IntegralRepFunction& g, std::string id) {
  BoundaryFunction f;
  f.dim = g.dim();
  f.id = std::move(id);
  f.evaluate = [g](const VectorXd& x) { return eval_integral_rep(g, x); };
  return f;
}

double rbv2_bound(const IntegralRepFunction& g) {
  const VectorXd origin = VectorXd::Zero(g.dim());
  const double g0 = g(origin);
  double sum = g.measure.total_variation() + std::abs(g0);
  for (int k = 0; k < g.dim(); ++k) sum += std::abs(g(VectorXd::Unit(g.dim(), k)) - g0);
  return sum;
}

IntegralRepFunction random_integral_rep(int d, int atoms, double total_variation, Rng& rng) {
  if (d < 1 || atoms < 1 || !(total_variation > 0.0)) {
    throw std::invalid_argument("random_integral_rep: need d >= 1, atoms >= 1, total variation > 0");
  }
  std::uniform_real_distribution<double> offset(-1.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto dirs = sample_unit_sphere(d, static_cast<std::size_t>(atoms), rng);
  IntegralRepFunction g;
  g.measure.d = d;
  for (const auto& w : dirs) {
    const double b = offset(rng);
    g.measure.atoms.push_back({CylinderPoint(w, b), normal(rng)});
  }
  const double scale = total_variation / g.measure.total_variation();
  double at_origin = 0.0;
  for (auto& a : g.measure.atoms) {
    a.weight *= scale;
    at_origin += a.weight * relu(-a.point.b);
  }
  g.c = VectorXd(d);
  for (int k = 0; k < d; ++k) g.c[k] = 0.5 * total_variation * offset(rng);
  g.c0 = -at_origin;
  return g;
}

ChangeOfVariablesSides change_of_variables_check(const DiscreteRadonMeasure& m,
                                                 const VectorXd& z) {
  if (z.size() != m.d) throw std::invalid_argument("change_of_variables_check: dimension mismatch");
  VectorXd z_tilde(m.d + 1);
  z_tilde.head(m.d) = z;
  z_tilde[m.d] = -1.0;
  ChangeOfVariablesSides out;
  for (const auto& a : m.atoms) {
    out.lhs += a.weight * std::abs(a.point.w.coords().dot(z) - a.point.b);
    const SpherePointLifted v = lift_to_sphere(a.point);
    out.rhs += a.weight * v.weight_factor() * std::abs(v.v.dot(z_tilde));
  }
  return out;
}

JordanSplit jordan_split(const DiscreteRadonMeasure& m) {
  JordanSplit out;
  out.plus.d = m.d;
  out.minus.d = m.d;
  for (const auto& a : m.atoms) {
    if (a.weight > 0.0) {
      out.plus.atoms.push_back(a);
      out.mass_plus += a.weight;
    } else if (a.weight < 0.0) {
      out.minus.atoms.push_back({a.point, -a.weight});
      out.mass_minus -= a.weight;
    }
  }
  return out;
}

namespace {

// Appends r draws from the probability measure m / mass as relu pairs with outer weight sign*mass/(2r).
void append_pairs(const DiscreteRadonMeasure& m, double mass, double sign, int r, Rng& rng,
                  ShallowNet& net, Eigen::Index& next) {
  if (m.atoms.empty() || r == 0) return;
  std::vector<double> probs;
  probs.reserve(m.atoms.size());
  for (const auto& a : m.atoms) probs.push_back(a.weight);
  std::discrete_distribution<std::size_t> pick(probs.begin(), probs.end());
  const double outer = sign * mass / (2.0 * r);
  for (int s = 0; s < r; ++s) {
    const Atom& a = m.atoms[pick(rng)];
    net.w.row(next) = a.point.w.coords().transpose();
    net.b[next] = a.point.b;
    net.v[next] = outer;
    ++next;
    net.w.row(next) = -a.point.w.coords().transpose();
    net.b[next] = -a.point.b;
    net.v[next] = outer;
    ++next;
  }
}

}  // namespace

ShallowNet subsample_to_shallow(const IntegralRepFunction& g, int neurons, Rng& rng) {
  if (neurons < 4) throw std::invalid_argument("subsample_to_shallow: need at least 4 neurons");
  g.measure.validate();
  const int d = g.dim();
  const int r = neurons / 4;

  ShallowNet net{MatrixXd::Zero(neurons, d), VectorXd::Zero(neurons), VectorXd::Zero(neurons),
                 g.c, g.c0};
  // relu(t) = t/2 + |t|/2: the t/2 part integrates exactly to an affine map.
  for (const auto& a : g.measure.atoms) {
    net.c += 0.5 * a.weight * a.point.w.coords();
    net.c0 -= 0.5 * a.weight * a.point.b;
  }
  const JordanSplit split = jordan_split(g.measure);
  Eigen::Index next = 0;
  append_pairs(split.plus, split.mass_plus, 1.0, r, rng, net, next);
  append_pairs(split.minus, split.mass_minus, -1.0, r, rng, net, next);
  return net;
}

double sup_error(const Evaluable& f, const Evaluable& g, int probe_points, int d, Rng& rng) {
  if (probe_points < 1000) throw std::invalid_argument("sup_error: need at least 1000 probe points");
  const MatrixXd pts = sample_unit_ball(d, static_cast<std::size_t>(probe_points), rng);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < pts.cols(); ++j) {
    const VectorXd x = pts.col(j);
    worst = std::max(worst, std::abs(f(x) - g(x)));
  }
  return worst;
}

double fit_rate(std::span<const double> ns, std::span<const double> errs) {
  if (ns.size() != errs.size() || ns.size() < 3) {
    throw std::invalid_argument("fit_rate: need at least 3 matching points");
  }
  const auto n = static_cast<double>(ns.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (!(ns[i] > 0.0) || !(errs[i] > 0.0)) {
      throw std::invalid_argument("fit_rate: entries must be positive");
    }
    const double x = std::log(ns[i]);
    const double y = std::log(errs[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (!(std::abs(denom) > 0.0)) throw std::invalid_argument("fit_rate: all N equal");
  return (n * sxy - sx * sy) / denom;
}

DomainSampler uniform_ball_sampler(int d) {
  return [d](std::size_t n, Rng& rng) { return sample_unit_ball(d, n, rng); };
}

DomainSampler slab_sampler(int d, double half_height) {
  if (d < 2) throw std::invalid_argument("slab_sampler: need d >= 2");
  return [d, half_height](std::size_t n, Rng& rng) {
    MatrixXd pts(d, static_cast<Eigen::Index>(n));
    pts.topRows(d - 1) = sample_unit_ball(d - 1, n, rng);
    std::uniform_real_distribution<double> height(-half_height, half_height);
    for (Eigen::Index j = 0; j < pts.cols(); ++j) pts(d - 1, j) = height(rng);
    return pts;
  };
}

double disagreement_measure(const HorizonClassifier& h_ref, const LayeredNet& net,
                            double threshold, int probes, const DomainSampler& sampler,
                            Rng& rng) {
  if (probes < 1000) throw std::invalid_argument("disagreement_measure: need at least 1000 probes");
  const MatrixXd pts = sampler(static_cast<std::size_t>(probes), rng);
  const MatrixXd out = eval_layered(net, pts);
  std::size_t wrong = 0;
  for (Eigen::Index j = 0; j < pts.cols(); ++j) {
    const int predicted = out(0, j) >= threshold ? 1 : 0;
    if (predicted != h_ref.label(pts.col(j))) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(pts.cols());
}

TubeQuery::TubeQuery(BoundaryFunction f_, Eigen::Index axis_, double epsilon_)
    : f(std::move(f_)), axis(axis_), epsilon(epsilon_) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("TubeQuery: epsilon must be positive");
  if (axis < 0 || axis > f.dim) throw std::invalid_argument("TubeQuery: axis out of range");
}

double tube_mass(const TubeQuery& q, int probes, const DomainSampler& sampler, Rng& rng) {
  if (probes < 1000) throw std::invalid_argument("tube_mass: need at least 1000 probes");
  const MatrixXd pts = sampler(static_cast<std::size_t>(probes), rng);
  std::size_t inside = 0;
  for (Eigen::Index j = 0; j < pts.cols(); ++j) {
    const VectorXd x = pts.col(j);
    if (std::abs(x[q.axis] - q.f(drop_axis(x, q.axis))) <= q.epsilon) ++inside;
  }
  return static_cast<double>(inside) / static_cast<double>(pts.cols());
}

}  // namespace rbv
