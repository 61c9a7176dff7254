#pragma once

#include "rbv/netcore.hpp"
#include "rbv/radon.hpp"
#include "rbv/training.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rbv {

/// Random atomic-measure functions, subsampled at several widths.
struct ApproxStudySettings {
  int dim = 3;
  std::vector<int> neurons{16, 64, 256, 1024};
  int atoms = 200;
  double total_variation = 1.0;
  int probes = 2000;
  int trials = 20;
};

struct ExperimentConfig {
  std::vector<int> dims{2, 3, 4};
  std::vector<NormKind> norms{std::begin(kAllNormKinds), std::end(kAllNormKinds)};
  std::vector<std::int64_t> sample_sizes{250, 500, 1000, 2000, 4000};
  int trials = 5;
  double tau = 1.0;
  /// Rate-statement slack; reported next to fitted learning rates only.
  double kappa = 0.0;
  double train_fraction = 0.8;
  Orientation orientation = Orientation::BelowGraph;
  TrainSettings training;
  NormSettings norm_estimation;
  ApproxStudySettings approx_rate;
  ApproxStudySettings horizon_approx{3, {16, 64, 256}, 200, 1.0, 20000, 10};
  std::uint64_t master_seed = 1;
};

struct ConfigResult {
  ExperimentConfig config;
  std::vector<std::string> errors;  // field-level messages; empty when valid

  bool ok() const { return errors.empty(); }
};

/// Fills defaults, rejects unknown keys and out-of-range values.
ConfigResult parse_config(const std::string& json_text);
ConfigResult load_config(const std::string& path);

/// Fully resolved configuration; parse_config(config_to_json(c)) reproduces c.
std::string config_to_json(const ExperimentConfig& config);

/// Applies "a.b=value" overrides (value parsed as JSON, else taken as a string).
std::string apply_overrides(const std::string& json_text, const std::vector<std::string>& overrides);

}  // namespace rbv
