#include "rbv/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rbv {

void LabeledSample::validate() const {
  if (labels.size() != points.cols()) {
    throw std::invalid_argument("LabeledSample: " + std::to_string(points.cols()) + " points but " +
                                std::to_string(labels.size()) + " labels");
  }
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0.0 && labels[i] != 1.0) throw std::invalid_argument("LabeledSample: labels must be 0 or 1");
  }
}

LabeledSample LabeledSample::subset(const std::vector<Eigen::Index>& indices) const {
  return {points(Eigen::all, indices), labels(indices)};
}

VectorXd ClampedNet::eval(const MatrixXd& xs) const {
  return eval_layered(body, xs).row(0).transpose().unaryExpr([](double z) { return clamp01(z); });
}

LayeredNet ClampedNet::materialize() const {
  body.validate();
  if (body.output_dim() != 1) throw std::invalid_argument("ClampedNet: body must have one output");
  LayeredNet out = body;
  const Layer last = out.layers.back();
  Layer split{MatrixXd(2, last.A.cols()), VectorXd(2)};
  split.A.row(0) = last.A.row(0);
  split.A.row(1) = last.A.row(0);
  split.b << last.b[0], last.b[0] - 1.0;
  out.layers.back() = std::move(split);
  Layer head{MatrixXd(1, 2), VectorXd::Zero(1)};
  head.A << 1.0, -1.0;
  out.layers.push_back(std::move(head));
  return out;
}

double hinge_empirical_risk(const VectorXd& outputs, const VectorXd& labels) {
  if (outputs.size() == 0) throw std::invalid_argument("hinge_empirical_risk: empty sample");
  if (outputs.size() != labels.size()) throw std::invalid_argument("hinge_empirical_risk: size mismatch");
  const auto margin = (2.0 * labels.array() - 1.0) * (2.0 * outputs.array() - 1.0);
  return (1.0 - margin).cwiseMax(0.0).mean();
}

LayeredNet hinge_gradient(const ClampedNet& net, const LabeledSample& batch) {
  const LayeredNet& body = net.body;
  if (batch.size() == 0) throw std::invalid_argument("hinge_gradient: empty batch");
  if (batch.dim() != body.input_dim() || batch.labels.size() != batch.size() ||
      body.output_dim() != 1) {
    throw std::invalid_argument("hinge_gradient: batch does not match the network shape");
  }
  const std::size_t depth = body.layers.size();
  std::vector<MatrixXd> pre(depth);
  std::vector<MatrixXd> act(depth + 1);
  act[0] = batch.points;
  for (std::size_t l = 0; l < depth; ++l) {
    pre[l] = body.layers[l].A * act[l];
    pre[l].colwise() += body.layers[l].b;
    act[l + 1] = l + 1 < depth ? pre[l].cwiseMax(0.0) : pre[l];
  }

  const double inv_m = 1.0 / static_cast<double>(batch.size());
  MatrixXd delta(1, batch.size());
  for (Eigen::Index j = 0; j < batch.size(); ++j) {
    const double z = pre[depth - 1](0, j);
    const double h = clamp01(z);
    const double sign = 2.0 * batch.labels[j] - 1.0;
    const double margin = sign * (2.0 * h - 1.0);
    const double dphi_dh = margin < 1.0 ? -2.0 * sign : 0.0;
    const double dh_dz = (z > 0.0 && z < 1.0) ? 1.0 : 0.0;
    delta(0, j) = inv_m * dphi_dh * dh_dz;
  }

  LayeredNet grad = body;
  for (std::size_t l = depth; l-- > 0;) {
    grad.layers[l].A.noalias() = delta * act[l].transpose();
    grad.layers[l].b = delta.rowwise().sum();
    if (l > 0) {
      MatrixXd back = body.layers[l].A.transpose() * delta;
      delta = back.cwiseProduct((pre[l - 1].array() > 0.0).cast<double>().matrix());
    }
  }
  return grad;
}

OptimizerState OptimizerState::fresh(const LayeredNet& shape, const AdamSettings& settings) {
  OptimizerState s;
  s.first_moment = shape;
  for (auto& l : s.first_moment.layers) {
    l.A.setZero();
    l.b.setZero();
  }
  s.second_moment = s.first_moment;
  s.settings = settings;
  return s;
}

namespace {

template <typename Derived>
void adam_update(Eigen::MatrixBase<Derived>& p, const Eigen::MatrixBase<Derived>& g,
                 Eigen::MatrixBase<Derived>& m, Eigen::MatrixBase<Derived>& v,
                 const AdamSettings& a, double bc1, double bc2) {
  m = a.beta1 * m + (1.0 - a.beta1) * g;
  v = a.beta2 * v + (1.0 - a.beta2) * g.cwiseAbs2();
  p.array() -= a.learning_rate * (m.array() / bc1) / ((v.array() / bc2).sqrt() + a.eps);
}

}  // namespace

void adam_step(LayeredNet& params, const LayeredNet& grads, OptimizerState& state) {
  if (params.layers.size() != grads.layers.size() ||
      params.layers.size() != state.first_moment.layers.size()) {
    throw std::invalid_argument("adam_step: parameter, gradient and state shapes differ");
  }
  ++state.step_count;
  const auto& a = state.settings;
  const double bc1 = 1.0 - std::pow(a.beta1, static_cast<double>(state.step_count));
  const double bc2 = 1.0 - std::pow(a.beta2, static_cast<double>(state.step_count));
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    auto& p = params.layers[l];
    const auto& g = grads.layers[l];
    if (p.A.rows() != g.A.rows() || p.A.cols() != g.A.cols() || p.b.size() != g.b.size()) {
      throw std::invalid_argument("adam_step: shape mismatch in layer " + std::to_string(l + 1));
    }
    adam_update(p.A, g.A, state.first_moment.layers[l].A, state.second_moment.layers[l].A, a, bc1, bc2);
    adam_update(p.b, g.b, state.first_moment.layers[l].b, state.second_moment.layers[l].b, a, bc1, bc2);
  }
}

std::int64_t project_weights(LayeredNet& net, double bound) {
  if (!(bound >= 1.0)) throw std::invalid_argument("project_weights: bound must be >= 1");
  std::int64_t clips = 0;
  const auto clip = [&](auto& x) {
    clips += (x.array().abs() > bound).count();
    x = x.cwiseMax(-bound).cwiseMin(bound);
  };
  for (auto& l : net.layers) {
    clip(l.A);
    clip(l.b);
  }
  return clips;
}

LayeredNet init_horizon_body(int d, std::int64_t n_tilde, Rng& rng) {
  const Eigen::Index width = n_tilde + 2;
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const auto fill = [&](auto& x, double scale) {
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = scale * unit(rng);
  };
  LayeredNet net;
  net.layers.push_back({MatrixXd(width, d), VectorXd(width)});
  net.layers.push_back({MatrixXd(2, width), VectorXd(2)});
  net.layers.push_back({MatrixXd(1, 2), VectorXd(1)});
  fill(net.layers[0].A, 1.0 / std::sqrt(static_cast<double>(d)));
  fill(net.layers[1].A, 1.0 / std::sqrt(static_cast<double>(width)));
  fill(net.layers[2].A, 1.0 / std::sqrt(2.0));
  for (auto& l : net.layers) fill(l.b, 1.0);
  return net;
}

namespace {

// Redraws until the clamp is responsive on at least half of the points and the
// pre-clamp output spreads over at least 0.1 there; flat starts stall on a plateau.
LayeredNet draw_live_body(int d, std::int64_t n_tilde, const MatrixXd& points, Rng& rng) {
  constexpr int kMaxDraws = 100;
  LayeredNet net;
  for (int draw = 0; draw < kMaxDraws; ++draw) {
    net = init_horizon_body(d, n_tilde, rng);
    const VectorXd z = eval_layered(net, points).row(0).transpose();
    const auto live = (z.array() > 0.0 && z.array() < 1.0);
    if (live.count() * 2 < z.size()) continue;
    const double lo = live.select(z.array(), 1.0).minCoeff();
    const double hi = live.select(z.array(), 0.0).maxCoeff();
    if (hi - lo > 0.1) return net;
  }
  return net;
}

}  // namespace

TrainResult train_erm(const ArchitectureBudget& arch, const LabeledSample& data,
                      const TrainSettings& settings, Rng& rng) {
  data.validate();
  if (data.size() == 0) throw std::invalid_argument("train_erm: empty training set");
  if (data.dim() < 2) throw std::invalid_argument("train_erm: need input dimension >= 2");
  if (arch.n_tilde < 1 || arch.n_tilde + 2 > arch.n) {
    throw std::invalid_argument("train_erm: architecture budget does not fit the (d, N~+2, 2, 1) template");
  }
  if (settings.epochs < 0 || settings.batch_size < 1 || settings.restarts < 1) {
    throw std::invalid_argument("train_erm: epochs >= 0, batch_size >= 1, restarts >= 1 required");
  }
  const int d = data.dim();
  const double bound = static_cast<double>(arch.b_bound);
  const Eigen::Index m = data.size();
  const Eigen::Index batch = std::min<Eigen::Index>(settings.batch_size, m);

  TrainResult best;
  best.report.final_empirical_risk = std::numeric_limits<double>::infinity();
  TrainReport& rep = best.report;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(m));

  for (int restart = 0; restart < settings.restarts; ++restart) {
    ClampedNet net{draw_live_body(d, arch.n_tilde, data.points, rng)};
    rep.projection_clips += project_weights(net.body, bound);
    OptimizerState state = OptimizerState::fresh(net.body, settings.adam);

    const auto track = [&](const ClampedNet& current) {
      const double risk = hinge_empirical_risk(current.eval(data.points), data.labels);
      if (risk < rep.final_empirical_risk) {
        rep.final_empirical_risk = risk;
        rep.best_restart = restart;
        best.net = current;
      }
      rep.risk_trajectory.push_back(rep.final_empirical_risk);
      return risk;
    };

    double risk = track(net);
    for (int epoch = 0; epoch < settings.epochs && risk > 0.0; ++epoch) {
      std::iota(order.begin(), order.end(), Eigen::Index{0});
      std::shuffle(order.begin(), order.end(), rng);
      for (Eigen::Index start = 0; start < m; start += batch) {
        const Eigen::Index stop = std::min(m, start + batch);
        const std::vector<Eigen::Index> idx(order.begin() + start, order.begin() + stop);
        const LayeredNet grad = hinge_gradient(net, data.subset(idx));
        adam_step(net.body, grad, state);
        rep.projection_clips += project_weights(net.body, bound);
      }
      ++rep.epochs_run;
      risk = track(net);
    }
    if (rep.final_empirical_risk == 0.0) break;
  }

  rep.audit = audit_network(best.net.body);
  rep.within_weight_budget = rep.audit.nonzero_weights <= arch.w_count &&
                             rep.audit.max_weight_magnitude <= bound;
  return best;
}

double zero_one_risk(const ClampedNet& net, const LabeledSample& test, double threshold) {
  if (test.size() == 0) throw std::invalid_argument("zero_one_risk: empty test set");
  const VectorXd out = net.eval(test.points);
  Eigen::Index wrong = 0;
  for (Eigen::Index j = 0; j < out.size(); ++j) {
    const double predicted = out[j] >= threshold ? 1.0 : 0.0;
    if (predicted != test.labels[j]) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(out.size());
}

double clamped_mse(const ClampedNet& net, const LabeledSample& test) {
  if (test.size() == 0) throw std::invalid_argument("clamped_mse: empty test set");
  return (net.eval(test.points) - test.labels).squaredNorm() / static_cast<double>(test.size());
}

}  // namespace rbv
