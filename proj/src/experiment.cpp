#include "dlcda/experiment.hpp"

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <set>
#include <system_error>

#include "dlcda/evaluate.hpp"
#include "dlcda/scatter.hpp"
#include "dlcda/version.hpp"

namespace dlcda {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& message) {
  throw ConfigError(message);
}

void check_keys(const json& obj, const char* where,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      bad(std::string("unknown key '") + item.key() + "' in " + where);
    }
  }
}

std::string get_string(const json& obj, const char* key,
                       const std::string& fallback) {
  if (!obj.contains(key) || obj.at(key).is_null()) {
    return fallback;
  }
  if (!obj.at(key).is_string()) {
    bad(std::string("'") + key + "' must be a string");
  }
  return obj.at(key).get<std::string>();
}

double get_number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key) || obj.at(key).is_null()) {
    return fallback;
  }
  if (!obj.at(key).is_number()) {
    bad(std::string("'") + key + "' must be a number");
  }
  return obj.at(key).get<double>();
}

int get_int(const json& obj, const char* key, int fallback) {
  if (!obj.contains(key) || obj.at(key).is_null()) {
    return fallback;
  }
  if (!obj.at(key).is_number_integer()) {
    bad(std::string("'") + key + "' must be an integer");
  }
  return obj.at(key).get<int>();
}

bool get_bool(const json& obj, const char* key, bool fallback) {
  if (!obj.contains(key) || obj.at(key).is_null()) {
    return fallback;
  }
  if (!obj.at(key).is_boolean()) {
    bad(std::string("'") + key + "' must be a boolean");
  }
  return obj.at(key).get<bool>();
}

FileSpec parse_file_spec(const json& obj, const char* side,
                         bool labels_required) {
  if (!obj.is_object()) {
    bad(std::string("'") + side + "' must be an object");
  }
  check_keys(obj, side, {"features", "labels", "format"});
  FileSpec spec;
  spec.features = get_string(obj, "features", "");
  if (spec.features.empty()) {
    bad(std::string("'") + side + ".features' is required");
  }
  const std::string labels = get_string(obj, "labels", "");
  if (!labels.empty()) {
    spec.labels = labels;
  } else if (labels_required) {
    bad(std::string("'") + side + ".labels' is required");
  }
  const std::string format = get_string(obj, "format", "csv");
  if (format == "csv") {
    spec.format = FeatureFormat::csv;
  } else if (format == "binary") {
    spec.format = FeatureFormat::binary;
  } else {
    bad(std::string("'") + side + ".format' must be \"csv\" or \"binary\"");
  }
  return spec;
}

std::string doubles(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

Variant parse_variant(const std::string& name) {
  if (name == "full") return Variant::full;
  if (name == "dda") return Variant::dda;
  if (name == "lcr") return Variant::lcr;
  bad("variant must be one of full, dda, lcr (got \"" + name + "\")");
}

KernelKind parse_kernel(const std::string& name) {
  if (name == "none") return KernelKind::none;
  if (name == "linear") return KernelKind::linear;
  if (name == "rbf") return KernelKind::rbf;
  bad("kernel must be one of none, linear, rbf (got \"" + name + "\")");
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::full: return "full";
    case Variant::dda: return "dda";
    case Variant::lcr: return "lcr";
  }
  return "full";
}

std::string to_string(KernelKind k) {
  switch (k) {
    case KernelKind::none: return "none";
    case KernelKind::linear: return "linear";
    case KernelKind::rbf: return "rbf";
  }
  return "none";
}

ExperimentConfig parse_experiment_config(const json& doc) {
  if (!doc.is_object()) {
    bad("top level must be a JSON object");
  }
  check_keys(doc, "the config", {"task", "source", "target", "synthetic",
                                 "solver", "standardize", "seed", "out_dir",
                                 "formats"});
  ExperimentConfig cfg;
  cfg.task = get_string(doc, "task", cfg.task);
  cfg.standardize = get_bool(doc, "standardize", cfg.standardize);
  cfg.out_dir = get_string(doc, "out_dir", cfg.out_dir);
  if (doc.contains("seed") && !doc.at("seed").is_null()) {
    if (!doc.at("seed").is_number_integer()) {
      bad("'seed' must be an integer");
    }
    cfg.seed = static_cast<std::uint64_t>(doc.at("seed").get<std::int64_t>());
  }

  const bool has_synth = doc.contains("synthetic") && !doc.at("synthetic").is_null();
  const bool has_source = doc.contains("source") && !doc.at("source").is_null();
  const bool has_target = doc.contains("target") && !doc.at("target").is_null();
  if (has_synth && (has_source || has_target)) {
    bad("choose either 'synthetic' or 'source'/'target', not both");
  }
  if (has_synth) {
    const json& s = doc.at("synthetic");
    if (!s.is_object()) {
      bad("'synthetic' must be an object");
    }
    check_keys(s, "synthetic", {"samples_per_class", "shift_small",
                                "shift_large", "moon_radius", "moon_noise"});
    SyntheticConfig sc;
    sc.samples_per_class = get_int(s, "samples_per_class", sc.samples_per_class);
    sc.shift_small = get_number(s, "shift_small", sc.shift_small);
    sc.shift_large = get_number(s, "shift_large", sc.shift_large);
    sc.moon_radius = get_number(s, "moon_radius", sc.moon_radius);
    sc.moon_noise = get_number(s, "moon_noise", sc.moon_noise);
    if (sc.samples_per_class < 4) {
      bad("'synthetic.samples_per_class' must be >= 4");
    }
    if (!(sc.moon_radius > 0.0) || !(sc.moon_noise > 0.0)) {
      bad("'synthetic.moon_radius' and 'synthetic.moon_noise' must be > 0");
    }
    cfg.synthetic = sc;
  } else if (has_source && has_target) {
    cfg.source = parse_file_spec(doc.at("source"), "source", true);
    cfg.target = parse_file_spec(doc.at("target"), "target", false);
  } else {
    bad("either 'synthetic' or both 'source' and 'target' are required");
  }

  if (doc.contains("solver") && !doc.at("solver").is_null()) {
    const json& s = doc.at("solver");
    if (!s.is_object()) {
      bad("'solver' must be an object");
    }
    check_keys(s, "solver",
               {"variant", "kernel", "gamma", "k", "alpha", "beta",
                "outer_iters", "inner_iters", "epsilon", "tol", "ridge"});
    SolverConfig& sv = cfg.solver;
    sv.variant = parse_variant(get_string(s, "variant", "full"));
    sv.kernel = parse_kernel(get_string(s, "kernel", "none"));
    sv.gamma = get_number(s, "gamma", 0.0);
    if (s.contains("gamma") && !s.at("gamma").is_null() && !(sv.gamma > 0.0)) {
      bad("'solver.gamma' must be > 0 (omit it for the median heuristic)");
    }
    sv.k = get_int(s, "k", sv.k);
    sv.alpha = get_number(s, "alpha", sv.alpha);
    sv.beta = get_number(s, "beta", sv.beta);
    sv.outer_iters = get_int(s, "outer_iters", sv.outer_iters);
    sv.inner_iters = get_int(s, "inner_iters", sv.inner_iters);
    sv.epsilon = get_number(s, "epsilon", sv.epsilon);
    sv.tol = get_number(s, "tol", sv.tol);
    sv.ridge = get_number(s, "ridge", sv.ridge);
    if (sv.k < 1) bad("'solver.k' must be >= 1");
    if (sv.alpha < 0.0 || sv.beta < 0.0) {
      bad("'solver.alpha' and 'solver.beta' must be >= 0");
    }
    if (sv.outer_iters < 1 || sv.inner_iters < 1) {
      bad("'solver.outer_iters' and 'solver.inner_iters' must be >= 1");
    }
    if (!(sv.epsilon > 0.0)) bad("'solver.epsilon' must be > 0");
    if (sv.tol < 0.0 || sv.ridge < 0.0) {
      bad("'solver.tol' and 'solver.ridge' must be >= 0");
    }
  }

  if (doc.contains("formats") && !doc.at("formats").is_null()) {
    if (!doc.at("formats").is_array()) {
      bad("'formats' must be an array");
    }
    cfg.formats.clear();
    for (const auto& f : doc.at("formats")) {
      if (!f.is_string()) {
        bad("'formats' entries must be strings");
      }
      const std::string name = f.get<std::string>();
      if (name != "json" && name != "csv" && name != "svg") {
        bad("unknown report format \"" + name + "\"");
      }
      cfg.formats.push_back(name);
    }
  }
  if (cfg.formats.empty()) {
    bad("'formats' must name at least one of json, csv, svg");
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open " + path);
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& err) {
    throw ConfigError(path + ": " + std::string(err.what()));
  }
  return parse_experiment_config(doc);
}

ordered_json config_to_json(const ExperimentConfig& cfg) {
  ordered_json out;
  out["task"] = cfg.task;
  if (cfg.synthetic) {
    ordered_json s;
    s["samples_per_class"] = cfg.synthetic->samples_per_class;
    s["shift_small"] = cfg.synthetic->shift_small;
    s["shift_large"] = cfg.synthetic->shift_large;
    s["moon_radius"] = cfg.synthetic->moon_radius;
    s["moon_noise"] = cfg.synthetic->moon_noise;
    out["synthetic"] = std::move(s);
  } else {
    const auto file_spec = [](const FileSpec& spec) {
      ordered_json f;
      f["features"] = spec.features;
      if (spec.labels) {
        f["labels"] = *spec.labels;
      }
      f["format"] = spec.format == FeatureFormat::csv ? "csv" : "binary";
      return f;
    };
    out["source"] = file_spec(*cfg.source);
    out["target"] = file_spec(*cfg.target);
  }
  ordered_json s;
  s["variant"] = to_string(cfg.solver.variant);
  s["kernel"] = to_string(cfg.solver.kernel);
  if (cfg.solver.gamma > 0.0) {
    s["gamma"] = cfg.solver.gamma;
  }
  s["k"] = cfg.solver.k;
  s["alpha"] = cfg.solver.alpha;
  s["beta"] = cfg.solver.beta;
  s["outer_iters"] = cfg.solver.outer_iters;
  s["inner_iters"] = cfg.solver.inner_iters;
  s["epsilon"] = cfg.solver.epsilon;
  s["tol"] = cfg.solver.tol;
  s["ridge"] = cfg.solver.ridge;
  out["solver"] = std::move(s);
  out["standardize"] = cfg.standardize;
  out["seed"] = cfg.seed;
  out["out_dir"] = cfg.out_dir;
  out["formats"] = cfg.formats;
  return out;
}

ordered_json report_to_json(const Report& report) {
  ordered_json out;
  out["task"] = report.task;
  out["variant"] = report.variant;
  out["tool_version"] = report.tool_version;
  ordered_json hp;
  hp["k"] = report.k;
  hp["alpha"] = report.alpha;
  hp["beta"] = report.beta;
  hp["iterations"] = report.iterations;
  hp["kernel"] = report.kernel;
  hp["gamma"] = report.gamma;
  out["hyper_parameters"] = std::move(hp);
  ordered_json per;
  per["objective"] = report.objective;
  if (report.target_accuracy.empty()) {
    per["target_accuracy"] = nullptr;
  } else {
    per["target_accuracy"] = report.target_accuracy;
  }
  out["per_iteration"] = std::move(per);
  if (report.final_accuracy) {
    out["final_accuracy"] = *report.final_accuracy;
  } else {
    out["final_accuracy"] = nullptr;
  }
  out["wall_clock_ms"] = report.wall_clock_ms;
  out["warnings"] = report.warnings;
  out["config"] = report.config_echo;
  return out;
}

Report run_experiment(const ExperimentConfig& cfg) {
  Dataset source;
  Dataset target;
  if (cfg.synthetic) {
    SyntheticConfig sc = *cfg.synthetic;
    sc.seed = cfg.seed;
    DomainPair pair = make_synthetic(sc);
    source = std::move(pair.source);
    target = std::move(pair.target);
  } else {
    if (!cfg.source || !cfg.target) {
      throw ConfigError("no data source configured");
    }
    source = load_features(cfg.source->features, cfg.source->labels,
                           cfg.source->format, DomainTag::source);
    target = load_features(cfg.target->features, cfg.target->labels,
                           cfg.target->format, DomainTag::target);
  }
  if (source.feature_dim() != target.feature_dim()) {
    throw DataError("source has " + std::to_string(source.feature_dim()) +
                    " features but target has " +
                    std::to_string(target.feature_dim()));
  }
  if (!source.labels) {
    throw ConfigError("source labels are required");
  }
  const int class_count = max_label(*source.labels);
  if (cfg.solver.k < class_count) {
    throw ConfigError("solver.k = " + std::to_string(cfg.solver.k) +
                      " is below the class count " +
                      std::to_string(class_count));
  }
  if (cfg.standardize) {
    source = standardize(source);
    target = standardize(target);
  }

  const auto started = std::chrono::steady_clock::now();
  const FittedModel model = fit(source, target, cfg.solver);
  const auto finished = std::chrono::steady_clock::now();

  Report report;
  report.task = cfg.task;
  report.variant = to_string(cfg.solver.variant);
  report.tool_version = kVersion;
  report.k = model.projection.k;
  report.alpha = cfg.solver.alpha;
  report.beta = cfg.solver.beta;
  report.iterations = cfg.solver.outer_iters;
  report.kernel = to_string(cfg.solver.kernel);
  report.gamma = model.kernel_gamma;
  for (const IterationRecord& rec : model.history) {
    report.objective.push_back(rec.objective);
    if (rec.target_accuracy) {
      report.target_accuracy.push_back(*rec.target_accuracy);
    }
  }
  if (!report.target_accuracy.empty()) {
    report.final_accuracy = report.target_accuracy.back();
  }
  report.wall_clock_ms =
      std::chrono::duration<double, std::milli>(finished - started).count();
  report.warnings = model.warnings;
  report.config_echo = config_to_json(cfg);

  // All computation succeeded; only now touch the filesystem.
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) {
    throw IoError("cannot create " + cfg.out_dir + ": " + ec.message());
  }
  const std::set<std::string> wanted(cfg.formats.begin(), cfg.formats.end());
  if (wanted.count("json")) {
    const fs::path path = fs::path(cfg.out_dir) / "report.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      throw IoError("cannot open " + path.string() + " for writing");
    }
    out << report_to_json(report).dump(2) << '\n';
    if (!out) {
      throw IoError("write failure on " + path.string());
    }
  }
  if (wanted.count("csv")) {
    const fs::path path = fs::path(cfg.out_dir) / "report.csv";
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      throw IoError("cannot open " + path.string() + " for writing");
    }
    out << "iteration,objective,target_accuracy\n";
    for (std::size_t i = 0; i < report.objective.size(); ++i) {
      out << (i + 1) << ',' << doubles(report.objective[i]) << ',';
      if (i < report.target_accuracy.size()) {
        out << doubles(report.target_accuracy[i]);
      }
      out << '\n';
    }
    if (!out) {
      throw IoError("write failure on " + path.string());
    }
  }
  if (wanted.count("svg")) {
    const fs::path path = fs::path(cfg.out_dir) / "scatter.svg";
    const std::vector<int>& target_marks =
        target.labels ? *target.labels : model.target_predictions;
    emit_scatter(model.embedded, *source.labels, target_marks, path.string());
  }
  return report;
}

}  // namespace dlcda
