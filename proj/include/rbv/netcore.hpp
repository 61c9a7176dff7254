#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rbv {

template <typename Scalar>
Scalar relu(Scalar z) {
  return z > Scalar(0) ? z : Scalar(0);
}

/// f_N(x) = sum_k v_k relu(w_k . x - b_k) + c . x + c0. Row k of `w` is w_k.
template <typename Scalar>
struct ShallowNetT {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Matrix w;
  Vector b;
  Vector v;
  Vector c;
  Scalar c0 = Scalar(0);

  static ShallowNetT affine(Vector slope, Scalar offset) {
    const auto d = slope.size();
    return {Matrix(0, d), Vector(0), Vector(0), std::move(slope), offset};
  }

  Eigen::Index input_dim() const { return c.size(); }
  Eigen::Index width() const { return w.rows(); }
  /// d + N + 1 in the layer-counting convention (affine part not split).
  Eigen::Index neuron_count() const { return input_dim() + width() + 1; }

  void validate() const {
    if (b.size() != w.rows() || v.size() != w.rows()) {
      throw std::invalid_argument("ShallowNet: w, b, v must all have N entries");
    }
    if (w.rows() > 0 && w.cols() != c.size()) {
      throw std::invalid_argument("ShallowNet: inner weights and slope disagree on d");
    }
  }

  /// max{|v_k|, |b_k|, |c0|, ||c||_2, ||w_k||_2}.
  Scalar bound() const {
    using std::abs;
    Scalar m = std::max(abs(c0), c.norm());
    if (width() > 0) {
      m = std::max({m, v.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff(),
                    w.rowwise().norm().maxCoeff()});
    }
    return m;
  }

  /// Largest single parameter magnitude (entrywise infinity norm).
  Scalar max_entry() const {
    using std::abs;
    Scalar m = std::max(abs(c0), c.size() ? c.cwiseAbs().maxCoeff() : Scalar(0));
    if (width() > 0) {
      m = std::max({m, v.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff(),
                    w.cwiseAbs().maxCoeff()});
    }
    return m;
  }
};

template <typename Scalar, typename Derived>
Scalar eval_shallow(const ShallowNetT<Scalar>& net, const Eigen::MatrixBase<Derived>& x) {
  if (x.size() != net.input_dim()) {
    throw std::invalid_argument("eval_shallow: input has dimension " + std::to_string(x.size()) +
                                ", net expects " + std::to_string(net.input_dim()));
  }
  Scalar out = net.c.dot(x) + net.c0;
  if (net.width() > 0) {
    out += net.v.dot(((net.w * x) - net.b).cwiseMax(Scalar(0)));
  }
  return out;
}

/// Column-wise evaluation; returns one value per column of `xs`.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> eval_shallow_batch(
    const ShallowNetT<Scalar>& net,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& xs) {
  if (xs.rows() != net.input_dim()) throw std::invalid_argument("eval_shallow_batch: dimension mismatch");
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out =
      (net.c.transpose() * xs).transpose().array() + net.c0;
  if (net.width() > 0) {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> pre = net.w * xs;
    pre.colwise() -= net.b;
    out.noalias() += (pre.cwiseMax(Scalar(0)).transpose() * net.v);
  }
  return out;
}

template <typename Scalar>
struct LayerT {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> A;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> b;
};

/// Phi = ((A_1, b_1), ..., (A_L, b_L)); ReLU between layers, none after the last.
template <typename Scalar>
struct LayeredNetT {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  std::vector<LayerT<Scalar>> layers;

  /// (d, N_1, ..., N_L).
  std::vector<Eigen::Index> architecture() const {
    std::vector<Eigen::Index> arch;
    if (layers.empty()) return arch;
    arch.push_back(layers.front().A.cols());
    for (const auto& l : layers) arch.push_back(l.A.rows());
    return arch;
  }

  Eigen::Index input_dim() const { return layers.empty() ? 0 : layers.front().A.cols(); }
  Eigen::Index output_dim() const { return layers.empty() ? 0 : layers.back().A.rows(); }

  void validate() const {
    if (layers.empty()) throw std::invalid_argument("LayeredNet: no layers");
    for (std::size_t l = 0; l < layers.size(); ++l) {
      if (layers[l].b.size() != layers[l].A.rows()) {
        throw std::invalid_argument("LayeredNet: bias length mismatch in layer " + std::to_string(l + 1));
      }
      if (l > 0 && layers[l].A.cols() != layers[l - 1].A.rows()) {
        throw std::invalid_argument("LayeredNet: shape mismatch entering layer " + std::to_string(l + 1));
      }
    }
  }

  /// N(Phi) = d + sum_l N_l.
  Eigen::Index neuron_count() const {
    Eigen::Index n = input_dim();
    for (const auto& l : layers) n += l.A.rows();
    return n;
  }

  /// W(Phi) = sum_l ||A_l||_0 + ||b_l||_0.
  Eigen::Index nonzero_weights() const {
    Eigen::Index n = 0;
    for (const auto& l : layers) {
      n += (l.A.array() != Scalar(0)).count() + (l.b.array() != Scalar(0)).count();
    }
    return n;
  }

  Scalar max_weight_magnitude() const {
    Scalar m = Scalar(0);
    for (const auto& l : layers) {
      if (l.A.size()) m = std::max(m, l.A.cwiseAbs().maxCoeff());
      if (l.b.size()) m = std::max(m, l.b.cwiseAbs().maxCoeff());
    }
    return m;
  }

  Eigen::Index parameter_count() const {
    Eigen::Index n = 0;
    for (const auto& l : layers) n += l.A.size() + l.b.size();
    return n;
  }
};

/// Realization R_relu(Phi) on a batch, one input per column.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> eval_layered(
    const LayeredNetT<Scalar>& net, const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& xs) {
  if (net.layers.empty() || xs.rows() != net.input_dim()) {
    throw std::invalid_argument("eval_layered: input has " + std::to_string(xs.rows()) +
                                " rows, net expects " + std::to_string(net.input_dim()));
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a = xs;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const auto& layer = net.layers[l];
    if (layer.A.cols() != a.rows()) throw std::invalid_argument("eval_layered: shape mismatch");
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> z = layer.A * a;
    z.colwise() += layer.b;
    if (l + 1 < net.layers.size()) z = z.cwiseMax(Scalar(0));
    a = std::move(z);
  }
  return a;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> eval_layered(
    const LayeredNetT<Scalar>& net, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x) {
  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> xs = x;
  return eval_layered(net, xs).col(0);
}

/// One hidden layer of N + 2 ReLUs; the affine slope goes through relu(c.x) - relu(-c.x).
template <typename Scalar>
LayeredNetT<Scalar> to_layered(const ShallowNetT<Scalar>& net) {
  using Matrix = typename ShallowNetT<Scalar>::Matrix;
  using Vector = typename ShallowNetT<Scalar>::Vector;
  net.validate();
  const auto d = net.input_dim();
  const auto n = net.width();
  LayerT<Scalar> hidden{Matrix::Zero(n + 2, d), Vector::Zero(n + 2)};
  hidden.A.topRows(n) = net.w;
  hidden.b.head(n) = -net.b;
  hidden.A.row(n) = net.c.transpose();
  hidden.A.row(n + 1) = -net.c.transpose();
  LayerT<Scalar> out{Matrix(1, n + 2), Vector(1)};
  out.A.leftCols(n) = net.v.transpose();
  out.A(0, n) = Scalar(1);
  out.A(0, n + 1) = Scalar(-1);
  out.b[0] = net.c0;
  return LayeredNetT<Scalar>{{std::move(hidden), std::move(out)}};
}

using ShallowNet = ShallowNetT<double>;
using Layer = LayerT<double>;
using LayeredNet = LayeredNetT<double>;

/// H_delta(z) = (relu(z) - relu(z - delta)) / delta, a ramp from 0 to 1 on [0, delta].
struct HeavisideSurrogate {
  explicit HeavisideSurrogate(double delta);
  double delta;
};

/// Piecewise form of H_delta: exactly 0 for z <= 0 and exactly 1 for z >= delta.
double heaviside_surrogate(const HeavisideSurrogate& h, double z);

/// Which side of the graph of the boundary is class 1.
enum class Orientation {
  BelowGraph,  // 1_{x_i <= f(x^[i])}
  AboveGraph,  // 1_{f(x^[i]) <= x_i}
};

/// x with coordinate `axis` removed.
Eigen::VectorXd drop_axis(const Eigen::VectorXd& x, Eigen::Index axis);

/// I_N(x) = H_delta(f_N(x^[i]) - x_i) as a (d, N+2, 2, 1) network; `axis` is 0-based.
LayeredNet compose_horizon_net(const ShallowNet& f_n, Eigen::Index axis, double delta,
                               Orientation orientation = Orientation::BelowGraph);

struct ArchitectureBudget {
  std::int64_t n_tilde = 0;
  std::int64_t n = 0;
  std::int64_t w_count = 0;
  std::int64_t b_bound = 0;
};

/// Network class size for m samples with an RBV^2 radius q.
ArchitectureBudget size_architecture(int d, std::int64_t m, double q, double tau);

struct NetworkAudit {
  Eigen::Index neurons = 0;
  Eigen::Index nonzero_weights = 0;
  double max_weight_magnitude = 0.0;
  bool in_unit_range_on_grid = true;
};

/// Structural counts plus a check of 0 <= output <= 1 on the given points (columns).
NetworkAudit audit_network(const LayeredNet& net, const Eigen::MatrixXd& points = {});

std::string to_json(const LayeredNet& net);
LayeredNet layered_from_json(const std::string& text);

}  // namespace rbv
