#pragma once

#include "rbv/config.hpp"
#include "rbv/horizon.hpp"
#include "rbv/training.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace rbv {

/// Sine-product boundary families: 25 functions for d = 2, 36 for d = 3, 64 for d = 4.
std::vector<BoundaryFunction> base_family(int d);

VectorXd label_points(const HorizonClassifier& h, const MatrixXd& points);

/// m points uniform on B_1^{d-1} x [-2, 2], labeled by h.
LabeledSample make_dataset(const HorizonClassifier& h, std::int64_t m, Rng& rng);

struct TrainTestSplit {
  LabeledSample train;
  LabeledSample test;
  std::vector<Eigen::Index> train_indices;
  std::vector<Eigen::Index> test_indices;
};

/// Random disjoint partition with round(train_fraction * m) training points.
TrainTestSplit split_train_test(const LabeledSample& s, double train_fraction, Rng& rng);

std::uint64_t cell_seed(std::uint64_t master_seed, int dim, NormKind norm, int function_index,
                        std::int64_t m, int trial);

struct ErrorRow {
  int dim = 0;
  NormKind norm = NormKind::LInf;
  int function_index = 0;
  std::string function_id;
  std::int64_t m = 0;
  int trial = 0;
  double test_error = 0.0;
  double train_risk = 0.0;
  double test_mse = 0.0;
  double label_mean = 0.0;
  double boundary_sup = 0.0;
  std::uint64_t seed = 0;
  double wall_time = 0.0;
  bool failed = false;
  std::string error;
};

struct ErrorReport {
  std::vector<ErrorRow> rows;

  std::size_t failures() const;
};

/// Norm of every (dim, norm, function index) the config touches.
using NormTable = std::map<std::tuple<int, NormKind, int>, double>;

NormTable compute_norm_table(const ExperimentConfig& cfg, int workers);

struct CellFit {
  ErrorRow row;
  std::optional<TrainResult> fit;  // empty when the cell failed
  ArchitectureBudget budget;
};

/// run_cell, keeping the trained network.
CellFit fit_cell(const ExperimentConfig& cfg, int dim, NormKind norm, int function_index,
                 std::int64_t m, int trial, const NormTable* norms = nullptr);

/// normalize -> dataset -> split -> size -> train -> test error, for one cell.
/// Uses `norms` when it has the entry, otherwise estimates the norm.
ErrorRow run_cell(const ExperimentConfig& cfg, int dim, NormKind norm, int function_index,
                  std::int64_t m, int trial, const NormTable* norms = nullptr);

/// Every cell of dims x norms x family x sample_sizes x trials, sorted by cell identity.
ErrorReport run_experiment(const ExperimentConfig& cfg, int workers);

struct AggregateRow {
  int dim = 0;
  NormKind norm = NormKind::LInf;
  std::int64_t m = 0;
  double mean_error = 0.0;
  double std_error = 0.0;  // sample standard deviation over cells
  std::size_t n_cells = 0;
};

std::vector<AggregateRow> aggregate(const ErrorReport& report);

/// Mean error per (dim, norm, m) in a lookup map.
std::map<std::tuple<int, NormKind, std::int64_t>, double> mean_errors(const ErrorReport& report);

void write_report_csv(std::ostream& out, const ErrorReport& report);
ErrorReport read_report_csv(std::istream& in);
void write_timings_csv(std::ostream& out, const ErrorReport& report);
void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows);
/// m, then one mean-error column per norm present for `dim`.
void write_plotdata_csv(std::ostream& out, const std::vector<AggregateRow>& rows, int dim);

/// Fitted slope of mean error against m per (dim, norm), with the theoretical exponent.
void write_rates_csv(std::ostream& out, const std::vector<AggregateRow>& rows, double kappa);

struct ApproxRow {
  int d = 0;
  int n = 0;
  int trial = 0;
  double value = 0.0;  // sup error or disagreement
  std::uint64_t seed = 0;
  std::string measure_id;
};

/// sup |g - f_N| on B_1^d for a fresh random measure per trial, subsampled at each width.
std::vector<ApproxRow> run_approx_rate(const ApproxStudySettings& s, std::uint64_t master_seed);

/// Disagreement of the composed horizon net with h_g on the slab, for one fixed
/// random boundary g on B_1^{d-1}; s.dim is the horizon dimension d.
std::vector<ApproxRow> run_horizon_approx(const ApproxStudySettings& s, std::uint64_t master_seed,
                                          Orientation orientation = Orientation::BelowGraph);

/// Median over trials per width, in increasing width order.
std::vector<std::pair<int, double>> median_by_width(const std::vector<ApproxRow>& rows);

void write_approx_csv(std::ostream& out, const std::vector<ApproxRow>& rows, const char* value_name);

/// Doubles printed with 17 significant digits.
std::string format_double(double x);

}  // namespace rbv
