#include "rbv/bench.hpp"

#include "rbv/approx.hpp"
#include "rbv/errors.hpp"
#include "rbv/seed.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace rbv {

namespace {

std::string family_id(int d, int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "d%d_f%02d", d, index);
  return buf;
}

int parse_family_index(const std::string& id) {
  const auto pos = id.find("_f");
  if (pos == std::string::npos) throw std::invalid_argument("bad function id '" + id + "'");
  return std::stoi(id.substr(pos + 2));
}

// Runs task(i) for i in [0, count) on `workers` threads; results land by index.
template <typename Task>
void parallel_for(std::size_t count, int workers, Task&& task) {
  const auto n_threads = static_cast<std::size_t>(std::max(1, workers));
  if (n_threads == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::min(n_threads, count); ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) task(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

std::vector<BoundaryFunction> base_family(int d) {
  std::vector<BoundaryFunction> out;
  switch (d) {
    case 2:
      for (int s = 0; s <= 24; ++s) {
        out.push_back(sine_product({1.0 + s / 24.0}, family_id(2, s)));
      }
      break;
    case 3: {
      int idx = 0;
      for (int sk = 0; sk <= 5; ++sk) {
        for (int sl = 0; sl <= 5; ++sl) {
          out.push_back(sine_product({1.0 + sk / 5.0, 1.0 + sl / 5.0}, family_id(3, idx++)));
        }
      }
      break;
    }
    case 4: {
      const double freqs[] = {1.0, 4.0 / 3.0, 7.0 / 3.0, 2.0};
      int idx = 0;
      for (double k : freqs) {
        for (double l : freqs) {
          for (double j : freqs) out.push_back(sine_product({k, l, j}, family_id(4, idx++)));
        }
      }
      break;
    }
    default:
      throw std::invalid_argument("base_family: d must be 2, 3 or 4, got " + std::to_string(d));
  }
  return out;
}

VectorXd label_points(const HorizonClassifier& h, const MatrixXd& points) {
  VectorXd labels(points.cols());
  for (Eigen::Index j = 0; j < points.cols(); ++j) labels[j] = h.label(points.col(j));
  return labels;
}

LabeledSample make_dataset(const HorizonClassifier& h, std::int64_t m, Rng& rng) {
  if (m < 10) throw std::invalid_argument("make_dataset: need m >= 10");
  LabeledSample s;
  s.points = slab_sampler(h.dim())(static_cast<std::size_t>(m), rng);
  s.labels = label_points(h, s.points);
  return s;
}

TrainTestSplit split_train_test(const LabeledSample& s, double train_fraction, Rng& rng) {
  const Eigen::Index m = s.size();
  if (m < 10) throw std::invalid_argument("split_train_test: need m >= 10");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("split_train_test: train fraction must lie in (0, 1)");
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(m)));
  TrainTestSplit out;
  out.train_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.test_indices.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  std::sort(out.train_indices.begin(), out.train_indices.end());
  std::sort(out.test_indices.begin(), out.test_indices.end());
  out.train = s.subset(out.train_indices);
  out.test = s.subset(out.test_indices);
  return out;
}

std::uint64_t cell_seed(std::uint64_t master_seed, int dim, NormKind norm, int function_index,
                        std::int64_t m, int trial) {
  return hash_tuple(master_seed, dim, static_cast<int>(norm), function_index, m, trial);
}

std::size_t ErrorReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const ErrorRow& r) { return r.failed; }));
}

NormTable compute_norm_table(const ExperimentConfig& cfg, int workers) {
  std::set<NormKind> kinds(cfg.norms.begin(), cfg.norms.end());
  kinds.insert(NormKind::LInf);
  std::vector<std::tuple<int, NormKind, int>> keys;
  std::vector<std::vector<BoundaryFunction>> families;
  for (int d : cfg.dims) {
    families.push_back(base_family(d));
    for (NormKind k : kinds) {
      for (int i = 0; i < static_cast<int>(families.back().size()); ++i) keys.emplace_back(d, k, i);
    }
  }
  std::vector<double> values(keys.size());
  parallel_for(keys.size(), workers, [&](std::size_t n) {
    const auto [d, kind, i] = keys[n];
    const auto pos = std::find(cfg.dims.begin(), cfg.dims.end(), d) - cfg.dims.begin();
    values[n] = norm_value(families[static_cast<std::size_t>(pos)][static_cast<std::size_t>(i)],
                           kind, cfg.norm_estimation);
  });
  NormTable table;
  for (std::size_t n = 0; n < keys.size(); ++n) table[keys[n]] = values[n];
  return table;
}

CellFit fit_cell(const ExperimentConfig& cfg, int dim, NormKind norm, int function_index,
                 std::int64_t m, int trial, const NormTable* norms) {
  const auto started = std::chrono::steady_clock::now();
  CellFit out;
  ErrorRow& row = out.row;
  row.dim = dim;
  row.norm = norm;
  row.function_index = function_index;
  row.function_id = family_id(dim, function_index);
  row.m = m;
  row.trial = trial;
  row.seed = cell_seed(cfg.master_seed, dim, norm, function_index, m, trial);
  try {
    const auto family = base_family(dim);
    if (function_index < 0 || function_index >= static_cast<int>(family.size())) {
      throw std::invalid_argument("function index out of range");
    }
    const BoundaryFunction& f = family[static_cast<std::size_t>(function_index)];
    const auto lookup = [&](NormKind kind) {
      if (norms) {
        const auto it = norms->find({dim, kind, function_index});
        if (it != norms->end()) return it->second;
      }
      return norm_value(f, kind, cfg.norm_estimation);
    };
    const double value = lookup(norm);
    if (!(value > 1e-9)) {
      throw DegenerateFunctionError(std::string(to_string(norm)) + " norm is " + std::to_string(value));
    }
    row.boundary_sup = lookup(NormKind::LInf) / value;
    const HorizonClassifier h = horizon_on_last_axis(scaled(f, 1.0 / value), cfg.orientation);

    Rng rng(row.seed);
    const LabeledSample data = make_dataset(h, m, rng);
    row.label_mean = data.labels.mean();
    const TrainTestSplit split = split_train_test(data, cfg.train_fraction, rng);
    out.budget = size_architecture(dim, m, 1.0, cfg.tau);
    Rng train_rng(hash_combine(row.seed, cfg.training.seed));
    const TrainResult& fit = out.fit.emplace(train_erm(out.budget, split.train, cfg.training, train_rng));
    row.train_risk = fit.report.final_empirical_risk;
    row.test_error = zero_one_risk(fit.net, split.test);
    row.test_mse = clamped_mse(fit.net, split.test);
  } catch (const std::exception& e) {
    out.fit.reset();
    row.failed = true;
    row.error = "cell (dim=" + std::to_string(dim) + ", norm=" + std::string(to_string(norm)) +
                ", function=" + row.function_id + ", m=" + std::to_string(m) +
                ", trial=" + std::to_string(trial) + "): " + e.what();
  }
  row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return out;
}

ErrorRow run_cell(const ExperimentConfig& cfg, int dim, NormKind norm, int function_index,
                  std::int64_t m, int trial, const NormTable* norms) {
  return fit_cell(cfg, dim, norm, function_index, m, trial, norms).row;
}

ErrorReport run_experiment(const ExperimentConfig& cfg, int workers) {
  struct Cell {
    int dim;
    NormKind norm;
    int function_index;
    std::int64_t m;
    int trial;
  };
  std::vector<int> dims = cfg.dims;
  std::sort(dims.begin(), dims.end());
  std::vector<NormKind> norms = cfg.norms;
  std::sort(norms.begin(), norms.end());
  std::vector<std::int64_t> sizes = cfg.sample_sizes;
  std::sort(sizes.begin(), sizes.end());

  std::vector<Cell> cells;
  for (int d : dims) {
    const int family_size = static_cast<int>(base_family(d).size());
    for (NormKind k : norms) {
      for (int f = 0; f < family_size; ++f) {
        for (std::int64_t m : sizes) {
          for (int t = 0; t < cfg.trials; ++t) cells.push_back({d, k, f, m, t});
        }
      }
    }
  }

  const NormTable table = compute_norm_table(cfg, workers);
  ErrorReport report;
  report.rows.resize(cells.size());
  parallel_for(cells.size(), workers, [&](std::size_t i) {
    const Cell& c = cells[i];
    report.rows[i] = run_cell(cfg, c.dim, c.norm, c.function_index, c.m, c.trial, &table);
  });
  return report;
}

std::vector<AggregateRow> aggregate(const ErrorReport& report) {
  std::map<std::tuple<int, NormKind, std::int64_t>, std::vector<double>> groups;
  for (const auto& r : report.rows) {
    if (!r.failed) groups[{r.dim, r.norm, r.m}].push_back(r.test_error);
  }
  std::vector<AggregateRow> out;
  for (const auto& [key, errs] : groups) {
    AggregateRow a;
    std::tie(a.dim, a.norm, a.m) = key;
    a.n_cells = errs.size();
    a.mean_error = std::accumulate(errs.begin(), errs.end(), 0.0) / static_cast<double>(errs.size());
    if (errs.size() > 1) {
      double ss = 0.0;
      for (double e : errs) ss += (e - a.mean_error) * (e - a.mean_error);
      a.std_error = std::sqrt(ss / static_cast<double>(errs.size() - 1));
    }
    out.push_back(a);
  }
  return out;
}

std::map<std::tuple<int, NormKind, std::int64_t>, double> mean_errors(const ErrorReport& report) {
  std::map<std::tuple<int, NormKind, std::int64_t>, double> out;
  for (const auto& a : aggregate(report)) out[{a.dim, a.norm, a.m}] = a.mean_error;
  return out;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_report_csv(std::ostream& out, const ErrorReport& report) {
  out << "dim,norm_kind,function_id,m,trial,test_error,train_risk,test_mse,label_mean,"
         "boundary_sup,seed,status\n";
  for (const auto& r : report.rows) {
    out << r.dim << ',' << to_string(r.norm) << ',' << r.function_id << ',' << r.m << ','
        << r.trial << ',' << format_double(r.test_error) << ',' << format_double(r.train_risk)
        << ',' << format_double(r.test_mse) << ',' << format_double(r.label_mean) << ','
        << format_double(r.boundary_sup) << ',' << r.seed << ',' << (r.failed ? "failed" : "ok")
        << '\n';
  }
}

ErrorReport read_report_csv(std::istream& in) {
  ErrorReport report;
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("read_report_csv: empty input");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 12) throw std::invalid_argument("read_report_csv: malformed row '" + line + "'");
    ErrorRow r;
    r.dim = std::stoi(f[0]);
    r.norm = parse_norm_kind(f[1]);
    r.function_id = f[2];
    r.function_index = parse_family_index(f[2]);
    r.m = std::stoll(f[3]);
    r.trial = std::stoi(f[4]);
    r.test_error = std::stod(f[5]);
    r.train_risk = std::stod(f[6]);
    r.test_mse = std::stod(f[7]);
    r.label_mean = std::stod(f[8]);
    r.boundary_sup = std::stod(f[9]);
    r.seed = std::stoull(f[10]);
    r.failed = f[11] != "ok";
    report.rows.push_back(std::move(r));
  }
  return report;
}

void write_timings_csv(std::ostream& out, const ErrorReport& report) {
  out << "dim,norm_kind,function_id,m,trial,wall_time,error\n";
  for (const auto& r : report.rows) {
    out << r.dim << ',' << to_string(r.norm) << ',' << r.function_id << ',' << r.m << ','
        << r.trial << ',' << format_double(r.wall_time) << ",\"" << r.error << "\"\n";
  }
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  out << "dim,norm,m,mean_error,std_error,n_cells\n";
  for (const auto& a : rows) {
    out << a.dim << ',' << to_string(a.norm) << ',' << a.m << ',' << format_double(a.mean_error)
        << ',' << format_double(a.std_error) << ',' << a.n_cells << '\n';
  }
}

void write_plotdata_csv(std::ostream& out, const std::vector<AggregateRow>& rows, int dim) {
  std::set<NormKind> norms;
  std::set<std::int64_t> sizes;
  std::map<std::pair<std::int64_t, NormKind>, double> value;
  for (const auto& a : rows) {
    if (a.dim != dim) continue;
    norms.insert(a.norm);
    sizes.insert(a.m);
    value[{a.m, a.norm}] = a.mean_error;
  }
  out << 'm';
  for (NormKind k : norms) out << ',' << to_string(k);
  out << '\n';
  for (std::int64_t m : sizes) {
    out << m;
    for (NormKind k : norms) {
      const auto it = value.find({m, k});
      out << ',' << (it == value.end() ? std::string() : format_double(it->second));
    }
    out << '\n';
  }
}

void write_rates_csv(std::ostream& out, const std::vector<AggregateRow>& rows, double kappa) {
  std::map<std::pair<int, NormKind>, std::pair<std::vector<double>, std::vector<double>>> series;
  for (const auto& a : rows) {
    auto& [ms, errs] = series[{a.dim, a.norm}];
    ms.push_back(static_cast<double>(a.m));
    errs.push_back(a.mean_error);
  }
  out << "dim,norm,fitted_slope,theory_exponent,kappa\n";
  for (const auto& [key, s] : series) {
    const auto& [ms, errs] = s;
    double slope = std::nan("");
    const bool positive = std::all_of(errs.begin(), errs.end(), [](double e) { return e > 0.0; });
    if (ms.size() >= 3 && positive) slope = fit_rate(ms, errs);
    const int d = key.first;
    const double theory = -(d + 3.0) / (3.0 * d + 3.0) + kappa;
    out << d << ',' << to_string(key.second) << ',' << format_double(slope) << ','
        << format_double(theory) << ',' << format_double(kappa) << '\n';
  }
}

}  // namespace rbv

namespace rbv {

namespace {

std::string measure_name(const char* kind, int d, std::uint64_t seed) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_d%d_%016llx", kind, d, static_cast<unsigned long long>(seed));
  return buf;
}

}  // namespace

std::vector<ApproxRow> run_approx_rate(const ApproxStudySettings& s, std::uint64_t master_seed) {
  std::vector<ApproxRow> rows;
  for (int t = 0; t < s.trials; ++t) {
    const std::uint64_t measure_seed = hash_tuple(master_seed, fnv1a("approx-rate"), s.dim, t);
    Rng measure_rng(measure_seed);
    const IntegralRepFunction g = random_integral_rep(s.dim, s.atoms, s.total_variation, measure_rng);
    const std::string id = measure_name("rep", s.dim, measure_seed);
    const Evaluable target = [&g](const VectorXd& x) { return g(x); };
    for (int n : s.neurons) {
      ApproxRow row{s.dim, n, t, 0.0, hash_combine(measure_seed, static_cast<std::uint64_t>(n)), id};
      Rng rng(row.seed);
      const ShallowNet f_n = subsample_to_shallow(g, n, rng);
      row.value = sup_error(target, [&f_n](const VectorXd& x) { return eval_shallow(f_n, x); },
                            s.probes, s.dim, rng);
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<ApproxRow> run_horizon_approx(const ApproxStudySettings& s, std::uint64_t master_seed,
                                          Orientation orientation) {
  if (s.dim < 2) throw std::invalid_argument("run_horizon_approx: dim must be >= 2");
  const std::uint64_t measure_seed = hash_tuple(master_seed, fnv1a("horizon-approx"), s.dim);
  Rng measure_rng(measure_seed);
  const IntegralRepFunction g =
      random_integral_rep(s.dim - 1, s.atoms, s.total_variation, measure_rng);
  const std::string id = measure_name("rep", s.dim - 1, measure_seed);
  const HorizonClassifier h = horizon_on_last_axis(as_boundary(g, id), orientation);
  const DomainSampler sampler = slab_sampler(s.dim);
  std::vector<ApproxRow> rows;
  for (int t = 0; t < s.trials; ++t) {
    for (int n : s.neurons) {
      ApproxRow row{s.dim, n, t, 0.0, hash_tuple(measure_seed, t, n), id};
      Rng rng(row.seed);
      const ShallowNet f_n = subsample_to_shallow(g, n, rng);
      const double delta = std::pow(static_cast<double>(n), -(s.dim + 3.0) / (2.0 * s.dim));
      const LayeredNet net = compose_horizon_net(f_n, s.dim - 1, delta, orientation);
      row.value = disagreement_measure(h, net, 0.5, s.probes, sampler, rng);
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<std::pair<int, double>> median_by_width(const std::vector<ApproxRow>& rows) {
  std::map<int, std::vector<double>> by_n;
  for (const auto& r : rows) by_n[r.n].push_back(r.value);
  std::vector<std::pair<int, double>> out;
  for (auto& [n, v] : by_n) {
    std::sort(v.begin(), v.end());
    const std::size_t k = v.size() / 2;
    out.emplace_back(n, v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]));
  }
  return out;
}

void write_approx_csv(std::ostream& out, const std::vector<ApproxRow>& rows, const char* value_name) {
  out << "d,N,trial," << value_name << ",seed,measure_id\n";
  for (const auto& r : rows) {
    out << r.d << ',' << r.n << ',' << r.trial << ',' << format_double(r.value) << ',' << r.seed
        << ',' << r.measure_id << '\n';
  }
}

}  // namespace rbv
