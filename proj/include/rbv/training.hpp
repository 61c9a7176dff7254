#pragma once

#include "rbv/geometry.hpp"
#include "rbv/netcore.hpp"

#include <cstdint>
#include <vector>

namespace rbv {

/// Points (one per column) with binary labels.
struct LabeledSample {
  MatrixXd points;
  VectorXd labels;  // entries in {0, 1}

  Eigen::Index size() const { return points.cols(); }
  int dim() const { return static_cast<int>(points.rows()); }
  void validate() const;
  LabeledSample subset(const std::vector<Eigen::Index>& indices) const;
};

/// clamp(z) = relu(z) - relu(z - 1).
inline double clamp01(double z) { return relu(z) - relu(z - 1.0); }

/// A trainable body followed by the fixed [0, 1] clamp head.
struct ClampedNet {
  LayeredNet body;

  /// Clamped outputs, one per column of `xs`.
  VectorXd eval(const MatrixXd& xs) const;
  /// The same realization as one ReLU network: body's last layer is duplicated
  /// into relu(z), relu(z - 1) and a final (1, -1) layer.
  LayeredNet materialize() const;
};

/// (1/m) sum phi((2y - 1)(2h - 1)) with phi(t) = max(0, 1 - t).
double hinge_empirical_risk(const VectorXd& outputs, const VectorXd& labels);

/// Subgradient of the empirical hinge risk with respect to every body parameter,
/// shaped like the body. Kinks (ReLU at 0, clamp outside (0, 1), margin 1) get 0.
LayeredNet hinge_gradient(const ClampedNet& net, const LabeledSample& batch);

struct AdamSettings {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct OptimizerState {
  LayeredNet first_moment;
  LayeredNet second_moment;
  std::int64_t step_count = 0;
  AdamSettings settings;

  static OptimizerState fresh(const LayeredNet& shape, const AdamSettings& settings);
};

void adam_step(LayeredNet& params, const LayeredNet& grads, OptimizerState& state);

/// Clips every weight and bias into [-bound, bound]; returns the number clipped.
std::int64_t project_weights(LayeredNet& net, double bound);

struct TrainSettings {
  AdamSettings adam;
  int epochs = 500;
  int batch_size = 128;
  int restarts = 3;
  std::uint64_t seed = 0;
};

struct TrainReport {
  double final_empirical_risk = 0.0;
  int epochs_run = 0;
  std::int64_t projection_clips = 0;
  /// Best-so-far training risk after initialization and after every epoch, all restarts in order.
  std::vector<double> risk_trajectory;
  int best_restart = 0;
  NetworkAudit audit;
  bool within_weight_budget = true;
};

struct TrainResult {
  ClampedNet net;
  TrainReport report;
};

/// (d, n_tilde + 2, 2, 1) body with the documented uniform initialization.
LayeredNet init_horizon_body(int d, std::int64_t n_tilde, Rng& rng);

/// Best-iterate minibatch Adam on the hinge risk with projection onto [-B(m), B(m)]
/// after every step, repeated over restarts.
TrainResult train_erm(const ArchitectureBudget& arch, const LabeledSample& data,
                      const TrainSettings& settings, Rng& rng);

/// Fraction of points with 1_{h(x) >= threshold} != y.
double zero_one_risk(const ClampedNet& net, const LabeledSample& test, double threshold = 0.5);
/// Mean squared difference between the clamped output and the label.
double clamped_mse(const ClampedNet& net, const LabeledSample& test);

}  // namespace rbv
