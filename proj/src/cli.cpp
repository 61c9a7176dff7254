#include "rbv/cli.hpp"

#include "rbv/bench.hpp"
#include "rbv/config.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

namespace rbv {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config_path;
  std::vector<std::string> overrides;
  int workers = 1;
  std::string output_dir = "out";
  // train
  int dim = 2;
  std::string norm = "RBV2";
  int function_index = 0;
  std::int64_t m = 1000;
  int trial = 0;
  // report
  std::string input;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config_path, "JSON experiment config (defaults when omitted)");
  sub->add_option("--set", o.overrides, "Override a config field, e.g. --set training.epochs=100");
  sub->add_option("--workers", o.workers, "Parallel workers")->check(CLI::PositiveNumber);
  sub->add_option("--output-dir", o.output_dir, "Directory for output files");
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

template <typename Writer>
void write_csv(const fs::path& path, Writer&& writer) {
  std::ostringstream s;
  writer(s);
  write_file(path, s.str());
}

int cmd_norms(const ExperimentConfig& cfg, const Options& o, const fs::path& dir) {
  const NormTable table = compute_norm_table(cfg, o.workers);
  const std::uint64_t settings_hash = cfg.norm_estimation.hash();
  write_csv(dir / "norms.csv", [&](std::ostream& s) {
    s << "dim,function_id,norm_kind,value,estimator_settings_hash,seed\n";
    for (int d : cfg.dims) {
      const auto family = base_family(d);
      for (int i = 0; i < static_cast<int>(family.size()); ++i) {
        for (NormKind k : cfg.norms) {
          s << d << ',' << family[static_cast<std::size_t>(i)].id << ',' << to_string(k) << ','
            << format_double(table.at({d, k, i})) << ',' << settings_hash << ','
            << cfg.norm_estimation.seed << '\n';
        }
      }
    }
  });
  return kExitOk;
}

int cmd_train(const ExperimentConfig& cfg, const Options& o, const fs::path& dir, std::ostream& err) {
  const CellFit cell = fit_cell(cfg, o.dim, parse_norm_kind(o.norm), o.function_index, o.m, o.trial);
  const ErrorRow& r = cell.row;
  if (r.failed) {
    err << "rbv train: " << r.error << '\n';
    return kExitCellFailure;
  }
  const TrainReport& rep = cell.fit->report;
  write_file(dir / "model.json", to_json(cell.fit->net.materialize()) + "\n");
  const nlohmann::json j = {
      {"dim", r.dim},
      {"norm_kind", std::string(to_string(r.norm))},
      {"function_id", r.function_id},
      {"m", r.m},
      {"trial", r.trial},
      {"seed", r.seed},
      {"n_tilde", cell.budget.n_tilde},
      {"n", cell.budget.n},
      {"w_count", cell.budget.w_count},
      {"b_bound", cell.budget.b_bound},
      {"final_empirical_risk", rep.final_empirical_risk},
      {"test_error", r.test_error},
      {"test_mse", r.test_mse},
      {"epochs_run", rep.epochs_run},
      {"projection_clips", rep.projection_clips},
      {"best_restart", rep.best_restart},
      {"within_weight_budget", rep.within_weight_budget},
      {"neurons", rep.audit.neurons},
      {"nonzero_weights", rep.audit.nonzero_weights},
      {"max_weight_magnitude", rep.audit.max_weight_magnitude},
      {"risk_trajectory", rep.risk_trajectory},
      {"wall_time", r.wall_time},
  };
  write_file(dir / "train_report.json", j.dump(2) + "\n");
  return kExitOk;
}

void write_summaries(const ExperimentConfig& cfg, const ErrorReport& report, const fs::path& dir) {
  const auto agg = aggregate(report);
  write_csv(dir / "aggregate.csv", [&](std::ostream& s) { write_aggregate_csv(s, agg); });
  std::set<int> dims;
  for (const auto& a : agg) dims.insert(a.dim);
  for (int d : dims) {
    write_csv(dir / ("plotdata_d" + std::to_string(d) + ".csv"),
              [&](std::ostream& s) { write_plotdata_csv(s, agg, d); });
  }
  write_csv(dir / "rates.csv", [&](std::ostream& s) { write_rates_csv(s, agg, cfg.kappa); });
}

int report_failures(const ErrorReport& report, std::ostream& err) {
  for (const auto& r : report.rows) {
    if (r.failed) err << "rbv: " << r.error << '\n';
  }
  return report.failures() ? kExitCellFailure : kExitOk;
}

int cmd_experiment(const ExperimentConfig& cfg, const Options& o, const fs::path& dir, std::ostream& err) {
  const ErrorReport report = run_experiment(cfg, o.workers);
  write_csv(dir / "report.csv", [&](std::ostream& s) { write_report_csv(s, report); });
  write_csv(dir / "timings.csv", [&](std::ostream& s) { write_timings_csv(s, report); });
  write_summaries(cfg, report, dir);
  return report_failures(report, err);
}

int cmd_report(const ExperimentConfig& cfg, const Options& o, const fs::path& dir, std::ostream& err) {
  const fs::path input = o.input.empty() ? dir / "report.csv" : fs::path(o.input);
  std::ifstream in(input);
  if (!in) {
    err << "rbv report: cannot read " << input.string() << '\n';
    return kExitConfigError;
  }
  const ErrorReport report = read_report_csv(in);
  write_summaries(cfg, report, dir);
  return report.failures() ? kExitCellFailure : kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"RBV^2 horizon-function experiments"};
  app.require_subcommand(1);
  Options o;
  CLI::App* norms = app.add_subcommand("norms", "Norms of the boundary families");
  CLI::App* approx = app.add_subcommand("approx-rate", "Sup error of subsampled shallow networks");
  CLI::App* horizon = app.add_subcommand("horizon-approx", "Disagreement of composed horizon networks");
  CLI::App* train = app.add_subcommand("train", "Train one experiment cell and save the model");
  CLI::App* experiment = app.add_subcommand("experiment", "Run the full experiment matrix");
  CLI::App* report = app.add_subcommand("report", "Recompute summaries from report.csv");
  for (CLI::App* sub : {norms, approx, horizon, train, experiment, report}) add_common(sub, o);
  train->add_option("--dim", o.dim, "Boundary family dimension (2, 3 or 4)");
  train->add_option("--norm", o.norm, "LInf, L1, C1, Barron or RBV2");
  train->add_option("--function", o.function_index, "Index into the family");
  train->add_option("--m", o.m, "Sample size");
  train->add_option("--trial", o.trial, "Trial index");
  report->add_option("--input", o.input, "report.csv to read (default OUTPUT_DIR/report.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  std::string text = "{}";
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) {
      err << "rbv: cannot read config '" << o.config_path << "'\n";
      return kExitConfigError;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  ConfigResult parsed;
  try {
    parsed = parse_config(apply_overrides(text, o.overrides));
  } catch (const std::exception& e) {
    err << "rbv: " << e.what() << '\n';
    return kExitConfigError;
  }
  if (!parsed.ok()) {
    for (const auto& msg : parsed.errors) err << "rbv: config error: " << msg << '\n';
    return kExitConfigError;
  }
  if (train->parsed()) {
    try {
      parse_norm_kind(o.norm);
    } catch (const std::invalid_argument& e) {
      err << "rbv train: " << e.what() << '\n';
      return kExitConfigError;
    }
  }
  const ExperimentConfig& cfg = parsed.config;

  try {
    const fs::path dir(o.output_dir);
    fs::create_directories(dir);
    write_file(dir / "resolved_config.json", config_to_json(cfg));
    if (norms->parsed()) return cmd_norms(cfg, o, dir);
    if (approx->parsed()) {
      const auto rows = run_approx_rate(cfg.approx_rate, cfg.master_seed);
      write_csv(dir / "approx_rate.csv", [&](std::ostream& s) { write_approx_csv(s, rows, "sup_error"); });
      return kExitOk;
    }
    if (horizon->parsed()) {
      const auto rows = run_horizon_approx(cfg.horizon_approx, cfg.master_seed, cfg.orientation);
      write_csv(dir / "horizon_approx.csv",
                [&](std::ostream& s) { write_approx_csv(s, rows, "disagreement"); });
      return kExitOk;
    }
    if (train->parsed()) return cmd_train(cfg, o, dir, err);
    if (experiment->parsed()) return cmd_experiment(cfg, o, dir, err);
    return cmd_report(cfg, o, dir, err);
  } catch (const std::exception& e) {
    err << "rbv: " << e.what() << '\n';
    return kExitCellFailure;
  }
}

}  // namespace rbv
