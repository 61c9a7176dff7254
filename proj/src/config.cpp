#include "rbv/config.hpp"

#include "json.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace rbv {

using nlohmann::json;

namespace {

class Reader {
 public:
  explicit Reader(std::vector<std::string>& errors) : errors_(errors) {}

  // Reports keys of `obj` outside `allowed`, prefixed with `where`.
  void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (!ok.count(it.key())) errors_.push_back(where + it.key() + ": unknown key");
    }
  }

  template <typename T>
  void get(const json& obj, const std::string& where, const char* key, T& out) {
    if (!obj.contains(key)) return;
    try {
      out = obj.at(key).get<T>();
    } catch (const json::exception&) {
      errors_.push_back(where + key + ": wrong type");
    }
  }

  void error(const std::string& msg) { errors_.push_back(msg); }

 private:
  std::vector<std::string>& errors_;
};

std::string_view orientation_name(Orientation o) {
  return o == Orientation::BelowGraph ? "below_graph" : "above_graph";
}

void read_study(Reader& r, const json& obj, const std::string& where, ApproxStudySettings& s) {
  if (!obj.is_object()) {
    r.error(where + ": expected an object");
    return;
  }
  const std::string p = where + ".";
  r.check_keys(obj, p, {"dim", "neurons", "atoms", "total_variation", "probes", "trials"});
  r.get(obj, p, "dim", s.dim);
  r.get(obj, p, "neurons", s.neurons);
  r.get(obj, p, "atoms", s.atoms);
  r.get(obj, p, "total_variation", s.total_variation);
  r.get(obj, p, "probes", s.probes);
  r.get(obj, p, "trials", s.trials);
  if (s.dim < 2) r.error(p + "dim: must be >= 2");
  if (s.neurons.empty()) r.error(p + "neurons: must be nonempty");
  for (int n : s.neurons) {
    if (n < 4) r.error(p + "neurons: every entry must be >= 4");
  }
  if (s.atoms < 1) r.error(p + "atoms: must be >= 1");
  if (!(s.total_variation > 0.0)) r.error(p + "total_variation: must be > 0");
  if (s.probes < 1) r.error(p + "probes: must be >= 1");
  if (s.trials < 1) r.error(p + "trials: must be >= 1");
}

json study_to_json(const ApproxStudySettings& s) {
  return {{"dim", s.dim},
          {"neurons", s.neurons},
          {"atoms", s.atoms},
          {"total_variation", s.total_variation},
          {"probes", s.probes},
          {"trials", s.trials}};
}

}  // namespace

ConfigResult parse_config(const std::string& json_text) {
  ConfigResult result;
  auto& errors = result.errors;
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    errors.push_back(std::string("config: not valid JSON: ") + e.what());
    return result;
  }
  if (!root.is_object()) {
    errors.push_back("config: top level must be an object");
    return result;
  }

  ExperimentConfig& c = result.config;
  Reader r(errors);
  r.check_keys(root, "",
               {"dims", "norms", "sample_sizes", "trials", "tau", "kappa", "train_fraction",
                "orientation", "training", "norm_estimation", "approx_rate", "horizon_approx",
                "master_seed"});

  r.get(root, "", "dims", c.dims);
  if (c.dims.empty()) errors.push_back("dims: must be nonempty");
  for (int d : c.dims) {
    if (d < 2 || d > 4) errors.push_back("dims: " + std::to_string(d) + " is not in {2, 3, 4}");
  }
  if (std::set<int>(c.dims.begin(), c.dims.end()).size() != c.dims.size()) {
    errors.push_back("dims: duplicate entries");
  }

  if (root.contains("norms")) {
    std::vector<std::string> names;
    r.get(root, "", "norms", names);
    c.norms.clear();
    for (const auto& n : names) {
      try {
        c.norms.push_back(parse_norm_kind(n));
      } catch (const std::invalid_argument&) {
        errors.push_back("norms: unknown norm '" + n + "'");
      }
    }
    if (names.empty()) errors.push_back("norms: must be nonempty");
    if (std::set<NormKind>(c.norms.begin(), c.norms.end()).size() != c.norms.size()) {
      errors.push_back("norms: duplicate entries");
    }
  }

  r.get(root, "", "sample_sizes", c.sample_sizes);
  if (c.sample_sizes.empty()) errors.push_back("sample_sizes: must be nonempty");
  for (auto m : c.sample_sizes) {
    if (m < 10) errors.push_back("sample_sizes: " + std::to_string(m) + " is below 10");
  }
  if (std::set<std::int64_t>(c.sample_sizes.begin(), c.sample_sizes.end()).size() !=
      c.sample_sizes.size()) {
    errors.push_back("sample_sizes: duplicate entries");
  }

  r.get(root, "", "trials", c.trials);
  if (c.trials < 1) errors.push_back("trials: must be >= 1");
  r.get(root, "", "tau", c.tau);
  if (!(c.tau > 0.0)) errors.push_back("tau: must be > 0");
  r.get(root, "", "kappa", c.kappa);
  r.get(root, "", "train_fraction", c.train_fraction);
  if (!(c.train_fraction > 0.0 && c.train_fraction < 1.0)) {
    errors.push_back("train_fraction: must lie in (0, 1)");
  }
  if (root.contains("orientation")) {
    std::string o;
    r.get(root, "", "orientation", o);
    if (o == "below_graph") {
      c.orientation = Orientation::BelowGraph;
    } else if (o == "above_graph") {
      c.orientation = Orientation::AboveGraph;
    } else {
      errors.push_back("orientation: expected 'below_graph' or 'above_graph'");
    }
  }
  r.get(root, "", "master_seed", c.master_seed);

  if (root.contains("training")) {
    const json& t = root["training"];
    if (!t.is_object()) {
      errors.push_back("training: expected an object");
    } else {
      r.check_keys(t, "training.",
                   {"lr", "beta1", "beta2", "eps", "epochs", "batch_size", "restarts", "seed"});
      auto& s = c.training;
      r.get(t, "training.", "lr", s.adam.learning_rate);
      r.get(t, "training.", "beta1", s.adam.beta1);
      r.get(t, "training.", "beta2", s.adam.beta2);
      r.get(t, "training.", "eps", s.adam.eps);
      r.get(t, "training.", "epochs", s.epochs);
      r.get(t, "training.", "batch_size", s.batch_size);
      r.get(t, "training.", "restarts", s.restarts);
      r.get(t, "training.", "seed", s.seed);
    }
  }
  {
    const auto& s = c.training;
    if (!(s.adam.learning_rate > 0.0)) errors.push_back("training.lr: must be > 0");
    if (!(s.adam.beta1 >= 0.0 && s.adam.beta1 < 1.0)) errors.push_back("training.beta1: must lie in [0, 1)");
    if (!(s.adam.beta2 >= 0.0 && s.adam.beta2 < 1.0)) errors.push_back("training.beta2: must lie in [0, 1)");
    if (!(s.adam.eps > 0.0)) errors.push_back("training.eps: must be > 0");
    if (s.epochs < 1) errors.push_back("training.epochs: must be >= 1");
    if (s.batch_size < 1) errors.push_back("training.batch_size: must be >= 1");
    if (s.restarts < 1) errors.push_back("training.restarts: must be >= 1");
  }

  if (root.contains("norm_estimation")) {
    const json& n = root["norm_estimation"];
    if (!n.is_object()) {
      errors.push_back("norm_estimation: expected an object");
    } else {
      r.check_keys(n, "norm_estimation.",
                   {"directions", "offsets", "slice_samples", "ramp", "grid_1d", "grid_per_axis", "seed"});
      auto& s = c.norm_estimation;
      r.get(n, "norm_estimation.", "directions", s.radon.directions);
      r.get(n, "norm_estimation.", "offsets", s.radon.offsets);
      r.get(n, "norm_estimation.", "slice_samples", s.radon.slice_samples);
      if (n.contains("ramp")) {
        std::string mode;
        r.get(n, "norm_estimation.", "ramp", mode);
        try {
          s.radon.mode = parse_ramp_mode(mode);
        } catch (const std::invalid_argument&) {
          errors.push_back("norm_estimation.ramp: expected 'none' or 'spectral'");
        }
      }
      r.get(n, "norm_estimation.", "grid_1d", s.grid_1d);
      r.get(n, "norm_estimation.", "grid_per_axis", s.grid_per_axis);
      r.get(n, "norm_estimation.", "seed", s.seed);
    }
  }
  {
    const auto& s = c.norm_estimation;
    if (s.radon.directions < 1) errors.push_back("norm_estimation.directions: must be >= 1");
    if (s.radon.offsets < 8) errors.push_back("norm_estimation.offsets: must be >= 8");
    if (s.radon.slice_samples < 1) errors.push_back("norm_estimation.slice_samples: must be >= 1");
    if (s.grid_1d < 16) errors.push_back("norm_estimation.grid_1d: must be >= 16");
    if (s.grid_per_axis < 32) errors.push_back("norm_estimation.grid_per_axis: must be >= 32");
  }

  if (root.contains("approx_rate")) read_study(r, root["approx_rate"], "approx_rate", c.approx_rate);
  if (root.contains("horizon_approx")) {
    read_study(r, root["horizon_approx"], "horizon_approx", c.horizon_approx);
  }
  return result;
}

ConfigResult load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ConfigResult result;
    result.errors.push_back("config: cannot read '" + path + "'");
    return result;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const ExperimentConfig& c) {
  std::vector<std::string> norms;
  for (NormKind k : c.norms) norms.emplace_back(to_string(k));
  const auto& t = c.training;
  const auto& n = c.norm_estimation;
  json root = {
      {"dims", c.dims},
      {"norms", norms},
      {"sample_sizes", c.sample_sizes},
      {"trials", c.trials},
      {"tau", c.tau},
      {"kappa", c.kappa},
      {"train_fraction", c.train_fraction},
      {"orientation", std::string(orientation_name(c.orientation))},
      {"training",
       {{"lr", t.adam.learning_rate},
        {"beta1", t.adam.beta1},
        {"beta2", t.adam.beta2},
        {"eps", t.adam.eps},
        {"epochs", t.epochs},
        {"batch_size", t.batch_size},
        {"restarts", t.restarts},
        {"seed", t.seed}}},
      {"norm_estimation",
       {{"directions", n.radon.directions},
        {"offsets", n.radon.offsets},
        {"slice_samples", n.radon.slice_samples},
        {"ramp", std::string(to_string(n.radon.mode))},
        {"grid_1d", n.grid_1d},
        {"grid_per_axis", n.grid_per_axis},
        {"seed", n.seed}}},
      {"approx_rate", study_to_json(c.approx_rate)},
      {"horizon_approx", study_to_json(c.horizon_approx)},
      {"master_seed", c.master_seed},
  };
  return root.dump(2) + "\n";
}

std::string apply_overrides(const std::string& json_text, const std::vector<std::string>& overrides) {
  json root = json::parse(json_text);
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::invalid_argument("override '" + o + "' is not of the form key=value");
    }
    const std::string key = o.substr(0, eq);
    const std::string raw = o.substr(eq + 1);
    json value;
    try {
      value = json::parse(raw);
    } catch (const json::parse_error&) {
      value = raw;
    }
    json* node = &root;
    std::stringstream path(key);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(path, part, '.')) parts.push_back(part);
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
      json& child = (*node)[parts[i]];
      if (child.is_null()) child = json::object();
      if (!child.is_object()) throw std::invalid_argument("override '" + o + "': '" + parts[i] + "' is not an object");
      node = &child;
    }
    (*node)[parts.back()] = value;
  }
  return root.dump();
}

}  // namespace rbv
