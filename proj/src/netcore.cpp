#include "rbv/netcore.hpp"

#include "json.hpp"

#include <cmath>

namespace rbv {

using Eigen::MatrixXd;
using Eigen::VectorXd;

HeavisideSurrogate::HeavisideSurrogate(double delta_) : delta(delta_) {
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw std::invalid_argument("HeavisideSurrogate: delta must lie in (0, 1]");
  }
}

double heaviside_surrogate(const HeavisideSurrogate& h, double z) {
  if (z <= 0.0) return 0.0;
  if (z >= h.delta) return 1.0;
  return z / h.delta;
}

VectorXd drop_axis(const VectorXd& x, Eigen::Index axis) {
  if (axis < 0 || axis >= x.size()) throw std::invalid_argument("drop_axis: axis out of range");
  VectorXd out(x.size() - 1);
  out.head(axis) = x.head(axis);
  out.tail(x.size() - 1 - axis) = x.tail(x.size() - 1 - axis);
  return out;
}

namespace {

// Columns of the (d-1)-dimensional matrix placed into a d-dimensional one, skipping `axis`.
MatrixXd insert_zero_column(const MatrixXd& m, Eigen::Index axis) {
  MatrixXd out = MatrixXd::Zero(m.rows(), m.cols() + 1);
  out.leftCols(axis) = m.leftCols(axis);
  out.rightCols(m.cols() - axis) = m.rightCols(m.cols() - axis);
  return out;
}

}  // namespace

LayeredNet compose_horizon_net(const ShallowNet& f_n, Eigen::Index axis, double delta,
                               Orientation orientation) {
  f_n.validate();
  const HeavisideSurrogate h(delta);
  const Eigen::Index d = f_n.input_dim() + 1;
  if (axis < 0 || axis >= d) {
    throw std::invalid_argument("compose_horizon_net: axis " + std::to_string(axis) +
                                " out of range for d = " + std::to_string(d));
  }
  const Eigen::Index n = f_n.width();
  const double sign = orientation == Orientation::BelowGraph ? 1.0 : -1.0;

  // Layer 1: the N ReLUs of f_N on x^[i], then relu(l) and relu(-l) for the
  // linear functional l(x) = c . x^[i] - x_i.
  Layer first{MatrixXd::Zero(n + 2, d), VectorXd::Zero(n + 2)};
  if (n > 0) {
    first.A.topRows(n) = insert_zero_column(f_n.w, axis);
    first.b.head(n) = -f_n.b;
  }
  {
    Eigen::RowVectorXd lin = Eigen::RowVectorXd::Zero(d);
    lin.head(axis) = f_n.c.head(axis).transpose();
    lin.tail(d - 1 - axis) = f_n.c.tail(d - 1 - axis).transpose();
    lin[axis] = -1.0;
    first.A.row(n) = lin;
    first.A.row(n + 1) = -lin;
  }

  // Layer 2: both units see u = f_N(x^[i]) - x_i; the second is shifted by delta.
  Layer second{MatrixXd(2, n + 2), VectorXd(2)};
  Eigen::RowVectorXd mix(n + 2);
  mix.head(n) = f_n.v.transpose();
  mix[n] = 1.0;
  mix[n + 1] = -1.0;
  second.A.row(0) = sign * mix;
  second.A.row(1) = sign * mix;
  second.b[0] = sign * f_n.c0;
  second.b[1] = sign * f_n.c0 - h.delta;

  Layer out{MatrixXd(1, 2), VectorXd::Zero(1)};
  out.A(0, 0) = 1.0 / h.delta;
  out.A(0, 1) = -1.0 / h.delta;

  return LayeredNet{{std::move(first), std::move(second), std::move(out)}};
}

ArchitectureBudget size_architecture(int d, std::int64_t m, double q, double tau) {
  if (d < 2 || m < 1 || !(q > 0.0) || !(tau >= 1.0)) {
    throw std::invalid_argument("size_architecture: need d >= 2, m >= 1, q > 0, tau >= 1");
  }
  // ceil with a relative guard so exact powers (e.g. sqrt(10000)) are not bumped.
  const auto guarded_ceil = [](double x) {
    return static_cast<std::int64_t>(std::ceil(x - 1e-12 * std::max(1.0, std::abs(x))));
  };
  ArchitectureBudget out;
  const double exponent = 2.0 * d / (3.0 * d + 3.0);
  out.n_tilde = guarded_ceil(tau * std::pow(static_cast<double>(m), exponent));
  out.n = out.n_tilde + d + 3;
  out.w_count = (d + 4) * out.n_tilde + 3;
  const double growth = std::pow(static_cast<double>(out.n_tilde), (d + 3.0) / (2.0 * d));
  out.b_bound = guarded_ceil(std::max(1.0, std::sqrt(2.0) * q * growth));
  return out;
}

NetworkAudit audit_network(const LayeredNet& net, const MatrixXd& points) {
  NetworkAudit a;
  a.neurons = net.neuron_count();
  a.nonzero_weights = net.nonzero_weights();
  a.max_weight_magnitude = net.max_weight_magnitude();
  if (points.cols() > 0) {
    const MatrixXd out = eval_layered(net, points);
    a.in_unit_range_on_grid = (out.array() >= 0.0).all() && (out.array() <= 1.0).all();
  }
  return a;
}

std::string to_json(const LayeredNet& net) {
  net.validate();
  nlohmann::json doc;
  doc["architecture"] = net.architecture();
  auto& layers = doc["layers"] = nlohmann::json::array();
  for (const auto& l : net.layers) {
    std::vector<double> a;
    a.reserve(static_cast<std::size_t>(l.A.size()));
    for (Eigen::Index r = 0; r < l.A.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.A.cols(); ++c) a.push_back(l.A(r, c));
    }
    layers.push_back({{"A", a}, {"b", std::vector<double>(l.b.data(), l.b.data() + l.b.size())}});
  }
  return doc.dump();
}

LayeredNet layered_from_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  const auto arch = doc.at("architecture").get<std::vector<Eigen::Index>>();
  const auto& layers = doc.at("layers");
  if (arch.size() != layers.size() + 1) {
    throw std::invalid_argument("layered_from_json: architecture and layer count disagree");
  }
  LayeredNet net;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto a = layers[l].at("A").get<std::vector<double>>();
    const auto b = layers[l].at("b").get<std::vector<double>>();
    const Eigen::Index rows = arch[l + 1];
    const Eigen::Index cols = arch[l];
    if (static_cast<Eigen::Index>(a.size()) != rows * cols ||
        static_cast<Eigen::Index>(b.size()) != rows) {
      throw std::invalid_argument("layered_from_json: layer " + std::to_string(l + 1) +
                                  " does not match the architecture");
    }
    Layer layer{MatrixXd(rows, cols), Eigen::Map<const VectorXd>(b.data(), rows)};
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        layer.A(r, c) = a[static_cast<std::size_t>(r * cols + c)];
      }
    }
    net.layers.push_back(std::move(layer));
  }
  net.validate();
  return net;
}

}  // namespace rbv
