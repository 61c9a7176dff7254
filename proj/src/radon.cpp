#include "rbv/radon.hpp"

#include "rbv/errors.hpp"
#include "rbv/seed.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace rbv {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

std::string_view to_string(NormKind kind) {
  switch (kind) {
    case NormKind::LInf: return "LInf";
    case NormKind::L1: return "L1";
    case NormKind::C1: return "C1";
    case NormKind::Barron: return "Barron";
    case NormKind::RBV2: return "RBV2";
  }
  return "?";
}

NormKind parse_norm_kind(std::string_view name) {
  for (NormKind k : kAllNormKinds) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown norm kind '" + std::string(name) + "'");
}

std::string_view to_string(RampMode mode) {
  return mode == RampMode::Spectral ? "spectral" : "none";
}

RampMode parse_ramp_mode(std::string_view name) {
  if (name == "none") return RampMode::None;
  if (name == "spectral") return RampMode::Spectral;
  throw std::invalid_argument("unknown ramp mode '" + std::string(name) + "'");
}

double BoundaryFunction::at_scalar(double t) const {
  VectorXd x(1);
  x[0] = t;
  return evaluate(x);
}

BoundaryFunction sine_product(std::vector<double> frequencies, std::string id) {
  BoundaryFunction f;
  f.dim = static_cast<int>(frequencies.size());
  double sum = 0.0;
  for (double k : frequencies) sum += std::abs(k);
  f.frequency_sum = sum;
  f.id = std::move(id);
  f.evaluate = [ks = std::move(frequencies)](const VectorXd& x) {
    double p = 1.0;
    for (std::size_t j = 0; j < ks.size(); ++j) {
      p *= std::sin(kTwoPi * ks[j] * x[static_cast<Eigen::Index>(j)]);
    }
    return p;
  };
  return f;
}

BoundaryFunction scaled(const BoundaryFunction& f, double lambda) {
  BoundaryFunction g;
  g.dim = f.dim;
  g.id = f.id;
  if (f.frequency_sum) g.frequency_sum = *f.frequency_sum * std::abs(lambda);
  g.evaluate = [inner = f.evaluate, lambda](const VectorXd& x) { return lambda * inner(x); };
  return g;
}

double RadonGrid::offset_step() const {
  return (offsets[offsets.size() - 1] - offsets[0]) / static_cast<double>(offsets.size() - 1);
}

std::uint64_t NormSettings::hash() const {
  std::uint64_t h = fnv1a(to_string(radon.mode));
  return hash_tuple(h, radon.directions, radon.offsets, radon.slice_samples, grid_1d,
                    grid_per_axis, seed);
}

VectorXd offset_grid(int count) {
  if (count < 2) throw std::invalid_argument("offset_grid: need at least 2 offsets");
  return VectorXd::LinSpaced(count, -1.0, 1.0);
}

RadonGrid radon_transform(const BoundaryFunction& f, std::vector<UnitVector> directions,
                          const VectorXd& offsets, int slice_samples, Rng& rng) {
  if (f.dim < 2) {
    throw std::invalid_argument("radon_transform: dim < 2, use tv2_1d or radon_transform_line");
  }
  if (slice_samples < 1) throw std::invalid_argument("radon_transform: slice_samples < 1");
  for (const auto& w : directions) {
    if (w.dim() != f.dim) throw std::invalid_argument("radon_transform: direction dimension mismatch");
  }
  const double slice_ball = unit_ball_volume(f.dim - 1);
  const auto rows = static_cast<Eigen::Index>(directions.size());
  RadonGrid g{std::move(directions), offsets, MatrixXd(rows, offsets.size())};
  for (Eigen::Index i = 0; i < g.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < offsets.size(); ++j) {
      const double s = offsets[j];
      if (std::abs(s) >= 1.0) {
        g.values(i, j) = 0.0;
        continue;
      }
      const MatrixXd pts = sample_hyperplane_slice(g.directions[static_cast<std::size_t>(i)], s,
                                                   static_cast<std::size_t>(slice_samples), rng);
      double sum = 0.0;
      for (Eigen::Index c = 0; c < pts.cols(); ++c) sum += f(pts.col(c));
      const double volume = slice_ball * std::pow(1.0 - s * s, 0.5 * (f.dim - 1));
      g.values(i, j) = volume * sum / static_cast<double>(pts.cols());
    }
  }
  return g;
}

RadonGrid radon_transform(const BoundaryFunction& f, int direction_count, int offset_count,
                          int slice_samples, Rng& rng) {
  if (direction_count < 2 || offset_count < 4) {
    throw std::invalid_argument("radon_transform: need D >= 2 and T >= 4");
  }
  auto dirs = sample_unit_sphere(f.dim, static_cast<std::size_t>(direction_count), rng);
  return radon_transform(f, std::move(dirs), offset_grid(offset_count), slice_samples, rng);
}

RadonGrid radon_transform_line(const BoundaryFunction& f, int offset_count) {
  if (f.dim != 1) throw std::invalid_argument("radon_transform_line: dim must be 1");
  if (offset_count < 4) throw std::invalid_argument("radon_transform_line: need T >= 4");
  RadonGrid g{{UnitVector(VectorXd::Constant(1, 1.0)), UnitVector(VectorXd::Constant(1, -1.0))},
              offset_grid(offset_count),
              MatrixXd(2, offset_count)};
  for (Eigen::Index i = 0; i < 2; ++i) {
    const double w = g.directions[static_cast<std::size_t>(i)][0];
    for (Eigen::Index j = 0; j < offset_count; ++j) g.values(i, j) = f.at_scalar(w * g.offsets[j]);
  }
  return g;
}

RadonGrid ramp_filter(const RadonGrid& g, int d, RampMode mode) {
  if (d < 2) throw std::invalid_argument("ramp_filter: ambient dimension must be >= 2");
  if (mode == RampMode::None) return g;
  const Eigen::Index t = g.offset_count();
  if (t < 8) throw std::invalid_argument("ramp_filter: spectral mode needs T >= 8");

  const Eigen::Index n = 2 * t - 2;
  const double h = g.offset_step();
  const double power = d - 1;
  std::vector<double> symbol(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index kk = k <= n / 2 ? k : k - n;
    const double omega = kTwoPi * static_cast<double>(kk) / (static_cast<double>(n) * h);
    symbol[static_cast<std::size_t>(k)] = std::pow(std::abs(omega), power);
  }

  Eigen::FFT<double> fft;
  RadonGrid out = g;
  std::vector<double> ext(static_cast<std::size_t>(n));
  std::vector<std::complex<double>> spec;
  std::vector<double> back;
  for (Eigen::Index i = 0; i < g.direction_count(); ++i) {
    for (Eigen::Index j = 0; j < t; ++j) ext[static_cast<std::size_t>(j)] = g.values(i, j);
    for (Eigen::Index j = 1; j < t - 1; ++j) {
      ext[static_cast<std::size_t>(n - j)] = g.values(i, j);
    }
    fft.fwd(spec, ext);
    for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= symbol[k];
    fft.inv(back, spec);
    for (Eigen::Index j = 0; j < t; ++j) out.values(i, j) = back[static_cast<std::size_t>(j)];
  }
  return out;
}

MatrixXd second_difference(const MatrixXd& values, double step) {
  const Eigen::Index t = values.cols();
  if (t < 4) throw std::invalid_argument("second_difference: need at least 4 samples");
  const double inv = 1.0 / (step * step);
  MatrixXd out(values.rows(), t);
  for (Eigen::Index j = 1; j < t - 1; ++j) {
    out.col(j) = (values.col(j - 1) - 2.0 * values.col(j) + values.col(j + 1)) * inv;
  }
  out.col(0) = (2.0 * values.col(0) - 5.0 * values.col(1) + 4.0 * values.col(2) - values.col(3)) * inv;
  out.col(t - 1) = (2.0 * values.col(t - 1) - 5.0 * values.col(t - 2) + 4.0 * values.col(t - 3) -
                    values.col(t - 4)) * inv;
  return out;
}

double trapezoid(const Eigen::Ref<const VectorXd>& samples, double step) {
  const Eigen::Index n = samples.size();
  if (n < 2) return 0.0;
  return step * (samples.sum() - 0.5 * (samples[0] + samples[n - 1]));
}

double rtv2_prefactor(int d) {
  return 1.0 / (2.0 * std::pow(kTwoPi, d - 1));
}

namespace {

// prefactor * |S^{d-1}| * mean over directions of int |d^2/ds^2 profile| ds
double radon_total_variation(const RadonGrid& g, int d) {
  const double h = g.offset_step();
  const MatrixXd d2 = second_difference(g.values, h).cwiseAbs();
  double mean = 0.0;
  for (Eigen::Index i = 0; i < d2.rows(); ++i) mean += trapezoid(d2.row(i).transpose(), h);
  mean /= static_cast<double>(d2.rows());
  return rtv2_prefactor(d) * unit_sphere_area(d) * mean;
}

}  // namespace

double rtv2_estimate(const BoundaryFunction& f, const RadonSettings& settings, Rng& rng) {
  if (f.dim == 1) return radon_total_variation(radon_transform_line(f, settings.offsets), 1);
  const RadonGrid g =
      radon_transform(f, settings.directions, settings.offsets, settings.slice_samples, rng);
  return radon_total_variation(ramp_filter(g, f.dim, settings.mode), f.dim);
}

double tv2_1d(const BoundaryFunction& f, int grid) {
  if (f.dim != 1) throw std::invalid_argument("tv2_1d: function must be one-dimensional");
  if (grid < 16) throw std::invalid_argument("tv2_1d: grid must have at least 16 points");
  const VectorXd xs = offset_grid(grid);
  MatrixXd vals(1, grid);
  for (int j = 0; j < grid; ++j) vals(0, j) = f.at_scalar(xs[j]);
  const double h = 2.0 / (grid - 1);
  const VectorXd d2 = second_difference(vals, h).row(0).transpose().cwiseAbs();
  return trapezoid(d2, h);
}

double rbv2_norm(const BoundaryFunction& f, const NormSettings& settings) {
  const VectorXd origin = VectorXd::Zero(f.dim);
  const double f0 = f(origin);
  double increments = 0.0;
  for (int k = 0; k < f.dim; ++k) increments += std::abs(f(VectorXd::Unit(f.dim, k)) - f0);
  double tv = 0.0;
  if (f.dim == 1) {
    tv = tv2_1d(f, settings.grid_1d);
  } else {
    Rng rng(settings.seed);
    tv = rtv2_estimate(f, settings.radon, rng);
  }
  return tv + std::abs(f0) + increments;
}

double barron_norm_proxy(const BoundaryFunction& f) {
  if (!f.frequency_sum) {
    throw std::invalid_argument("barron_norm_proxy: function '" + f.id + "' has no frequency sum");
  }
  return kTwoPi * *f.frequency_sum;
}

SupNorms sup_norms(const BoundaryFunction& f, int grid_per_axis) {
  if (grid_per_axis < 32) throw std::invalid_argument("sup_norms: grid_per_axis must be >= 32");
  const int d = f.dim;
  const int g = grid_per_axis;
  const double h = 2.0 / g;
  constexpr double kDiffStep = 1e-6;

  SupNorms out;
  // Nodes -1 + j*h, j = 0..g, for the sup norms; cell midpoints for L1.
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  VectorXd x(d);
  VectorXd xp(d);
  double l1 = 0.0;
  bool done = false;
  while (!done) {
    for (int a = 0; a < d; ++a) x[a] = -1.0 + h * idx[static_cast<std::size_t>(a)];
    if (x.squaredNorm() <= 1.0 + 1e-12) {
      out.linf = std::max(out.linf, std::abs(f(x)));
      for (int a = 0; a < d; ++a) {
        xp = x;
        xp[a] += kDiffStep;
        const double up = f(xp);
        xp[a] = x[a] - kDiffStep;
        const double dn = f(xp);
        out.c1 = std::max(out.c1, std::abs(up - dn) / (2.0 * kDiffStep));
      }
    }
    bool in_range = true;
    for (int a = 0; a < d; ++a) {
      if (idx[static_cast<std::size_t>(a)] >= g) in_range = false;
    }
    if (in_range) {
      xp = x.array() + 0.5 * h;
      if (xp.squaredNorm() <= 1.0) l1 += std::abs(f(xp));
    }
    int a = 0;
    for (; a < d; ++a) {
      if (++idx[static_cast<std::size_t>(a)] <= g) break;
      idx[static_cast<std::size_t>(a)] = 0;
    }
    done = (a == d);
  }
  out.l1 = l1 * std::pow(h, d);
  out.c1 = std::max(out.c1, out.linf);
  return out;
}

double norm_value(const BoundaryFunction& f, NormKind kind, const NormSettings& settings) {
  switch (kind) {
    case NormKind::LInf: return sup_norms(f, settings.grid_per_axis).linf;
    case NormKind::L1: return sup_norms(f, settings.grid_per_axis).l1;
    case NormKind::C1: return sup_norms(f, settings.grid_per_axis).c1;
    case NormKind::Barron: return barron_norm_proxy(f);
    case NormKind::RBV2: return rbv2_norm(f, settings);
  }
  throw std::invalid_argument("norm_value: bad kind");
}

BoundaryFunction normalize_boundary(const BoundaryFunction& f, NormKind kind,
                                    const NormSettings& settings) {
  const double value = norm_value(f, kind, settings);
  if (!(value > 1e-9)) {
    throw DegenerateFunctionError("normalize_boundary: " + std::string(to_string(kind)) +
                                  " norm of '" + f.id + "' is " + std::to_string(value));
  }
  return scaled(f, 1.0 / value);
}

}  // namespace rbv
