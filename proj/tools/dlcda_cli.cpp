#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dlcda/experiment.hpp"
#include "dlcda/version.hpp"

namespace {

using dlcda::ExperimentConfig;
using dlcda::FeatureFormat;
using dlcda::FileSpec;

struct Flags {
  std::vector<std::string> configs;
  bool sweep = false;
  std::optional<std::string> source_features, source_labels;
  std::optional<std::string> target_features, target_labels;
  bool synthetic = false;
  std::optional<std::string> variant, kernel, out, formats, task;
  std::optional<int> k, iters;
  std::optional<double> alpha, beta, gamma;
  std::optional<long long> seed;
  bool standardize = false;
};

FeatureFormat guess_format(const std::string& path) {
  const auto dot = path.rfind('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot);
  return (ext == ".bin" || ext == ".dlcf") ? FeatureFormat::binary
                                           : FeatureFormat::csv;
}

void set_features(std::optional<FileSpec>& spec, const std::string& path) {
  if (!spec) {
    spec = FileSpec{};
  }
  spec->features = path;
  spec->format = guess_format(path);
}

void set_labels(std::optional<FileSpec>& spec, const std::string& path) {
  if (!spec) {
    spec = FileSpec{};
  }
  spec->labels = path;
}

std::vector<std::string> split_csv(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) {
      out.push_back(item);
    }
  }
  return out;
}

ExperimentConfig apply_flags(ExperimentConfig cfg, const Flags& f) {
  const bool file_flags = f.source_features || f.source_labels ||
                          f.target_features || f.target_labels;
  if (f.synthetic && file_flags) {
    throw dlcda::ConfigError("--synthetic conflicts with the file flags");
  }
  if (f.synthetic) {
    if (!cfg.synthetic) {
      cfg.synthetic = dlcda::SyntheticConfig{};
    }
    cfg.source.reset();
    cfg.target.reset();
  }
  if (file_flags) {
    cfg.synthetic.reset();
    if (f.source_features) set_features(cfg.source, *f.source_features);
    if (f.source_labels) set_labels(cfg.source, *f.source_labels);
    if (f.target_features) set_features(cfg.target, *f.target_features);
    if (f.target_labels) set_labels(cfg.target, *f.target_labels);
  }
  if (!cfg.synthetic) {
    if (!cfg.source || cfg.source->features.empty()) {
      throw dlcda::ConfigError("missing source features "
                               "(--source-features or a config file)");
    }
    if (!cfg.target || cfg.target->features.empty()) {
      throw dlcda::ConfigError("missing target features "
                               "(--target-features or a config file)");
    }
    if (!cfg.source->labels) {
      throw dlcda::ConfigError("missing source labels (--source-labels)");
    }
  }
  if (f.task) cfg.task = *f.task;
  if (f.variant) cfg.solver.variant = dlcda::parse_variant(*f.variant);
  if (f.kernel) cfg.solver.kernel = dlcda::parse_kernel(*f.kernel);
  if (f.gamma) {
    if (!(*f.gamma > 0.0)) {
      throw dlcda::ConfigError("--gamma must be > 0");
    }
    cfg.solver.gamma = *f.gamma;
  }
  if (f.k) {
    if (*f.k < 1) {
      throw dlcda::ConfigError("--k must be >= 1");
    }
    cfg.solver.k = *f.k;
  }
  if (f.alpha) {
    if (*f.alpha < 0.0) {
      throw dlcda::ConfigError("--alpha must be >= 0");
    }
    cfg.solver.alpha = *f.alpha;
  }
  if (f.beta) {
    if (*f.beta < 0.0) {
      throw dlcda::ConfigError("--beta must be >= 0");
    }
    cfg.solver.beta = *f.beta;
  }
  if (f.iters) {
    if (*f.iters < 1) {
      throw dlcda::ConfigError("--iters must be >= 1");
    }
    cfg.solver.outer_iters = *f.iters;
  }
  if (f.standardize) cfg.standardize = true;
  if (f.seed) cfg.seed = static_cast<std::uint64_t>(*f.seed);
  if (f.out) cfg.out_dir = *f.out;
  if (f.formats) {
    cfg.formats = split_csv(*f.formats);
    for (const std::string& name : cfg.formats) {
      if (name != "json" && name != "csv" && name != "svg") {
        throw dlcda::ConfigError("unknown report format \"" + name + "\"");
      }
    }
    if (cfg.formats.empty()) {
      throw dlcda::ConfigError("--formats must name at least one format");
    }
  }
  return cfg;
}

int run_one(const ExperimentConfig& cfg) {
  const dlcda::Report report = dlcda::run_experiment(cfg);
  std::printf("%s [%s]: ", report.task.c_str(), report.variant.c_str());
  if (report.final_accuracy) {
    std::printf("accuracy %.4f, ", *report.final_accuracy);
  }
  std::printf("%d iterations, %.0f ms -> %s\n", report.iterations,
              report.wall_clock_ms, cfg.out_dir.c_str());
  for (const std::string& w : report.warnings) {
    std::fprintf(stderr, "warning: %s\n", w.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Domain-adaptation experiment runner: learns a projection "
               "aligning source and target features while regressing class "
               "labels, then pseudo-labels the target domain."};
  Flags f;
  app.add_option("config", f.configs, "JSON experiment config file(s)");
  app.add_flag("--sweep", f.sweep, "run every given config in sequence");
  app.add_option("--source-features", f.source_features,
                 "source feature file (csv, or binary for .bin/.dlcf)");
  app.add_option("--source-labels", f.source_labels, "source label file");
  app.add_option("--target-features", f.target_features,
                 "target feature file");
  app.add_option("--target-labels", f.target_labels,
                 "target label file (optional, enables accuracy reporting)");
  app.add_flag("--synthetic", f.synthetic,
               "use the built-in four-class synthetic benchmark");
  app.add_option("--task", f.task, "task name used in the report");
  app.add_option("--variant", f.variant, "solver variant: full|dda|lcr");
  app.add_option("--k", f.k, "embedding width");
  app.add_option("--alpha", f.alpha, "Frobenius regularizer");
  app.add_option("--beta", f.beta, "row-sparsity regularizer");
  app.add_option("--iters", f.iters, "outer iterations");
  app.add_option("--kernel", f.kernel, "kernel: none|linear|rbf");
  app.add_option("--gamma", f.gamma,
                 "rbf width (omit for the median heuristic)");
  app.add_flag("--standardize", f.standardize,
               "z-score every feature before fitting");
  app.add_option("--seed", f.seed, "seed for synthetic data generation");
  app.add_option("--out", f.out, "output directory");
  app.add_option("--formats", f.formats,
                 "comma-separated report formats: json,csv,svg");
  app.set_version_flag("--version", std::string("dlcda ") + dlcda::kVersion);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (f.sweep) {
      if (f.configs.empty()) {
        throw dlcda::ConfigError("--sweep needs at least one config file");
      }
      for (const std::string& path : f.configs) {
        run_one(apply_flags(dlcda::load_experiment_config(path), f));
      }
      return 0;
    }
    if (f.configs.size() > 1) {
      throw dlcda::ConfigError("multiple configs need --sweep");
    }
    ExperimentConfig cfg = f.configs.empty()
                               ? ExperimentConfig{}
                               : dlcda::load_experiment_config(f.configs[0]);
    if (f.configs.empty() && !f.synthetic && !f.source_features) {
      throw dlcda::ConfigError(
          "nothing to run: give a config file, --synthetic, or the file "
          "flags (see --help)");
    }
    return run_one(apply_flags(std::move(cfg), f));
  } catch (const dlcda::ConfigError& e) {
    std::fprintf(stderr, "error: config: %s\n", e.what());
    return 2;
  } catch (const dlcda::DataError& e) {
    std::fprintf(stderr, "error: data: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: solver: %s\n", e.what());
    return 4;
  }
}
