#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dlcda/data.hpp"
#include "dlcda/solver.hpp"
#include "dlcda/synthetic.hpp"

namespace dlcda {

struct FileSpec {
  std::string features;
  std::optional<std::string> labels;
  FeatureFormat format = FeatureFormat::csv;
};

/// A fully resolved experiment: either a synthetic benchmark or a pair
/// of feature files, plus solver settings and output options.
struct ExperimentConfig {
  std::string task = "experiment";
  std::optional<FileSpec> source;
  std::optional<FileSpec> target;
  std::optional<SyntheticConfig> synthetic;
  SolverConfig solver;
  bool standardize = false;
  std::uint64_t seed = 0;  // seeds the synthetic generator
  std::string out_dir = "out";
  std::vector<std::string> formats = {"json"};  // subset of json/csv/svg
};

struct Report {
  std::string task;
  std::string variant;
  std::string tool_version;
  int k = 0;
  double alpha = 0.0;
  double beta = 0.0;
  int iterations = 0;
  std::string kernel;
  double gamma = 0.0;  // width actually used (0 unless rbf)
  std::vector<double> objective;              // one entry per iteration
  std::vector<double> target_accuracy;        // empty without ground truth
  std::optional<double> final_accuracy;
  double wall_clock_ms = 0.0;
  std::vector<std::string> warnings;
  nlohmann::ordered_json config_echo;
};

Variant parse_variant(const std::string& name);
KernelKind parse_kernel(const std::string& name);
std::string to_string(Variant v);
std::string to_string(KernelKind k);

/// Parses and validates a config document; throws ConfigError with the
/// offending key in the message.
ExperimentConfig parse_experiment_config(const nlohmann::json& doc);

/// Reads and parses a config file. An unreadable file or malformed
/// JSON is a ConfigError.
ExperimentConfig load_experiment_config(const std::string& path);

/// Canonical JSON form of a config; reports embed this echo, and feeding
/// it back through parse_experiment_config reproduces the run.
nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);

nlohmann::ordered_json report_to_json(const Report& report);

/// Loads (or synthesizes) the data, runs the configured variant, scores
/// target predictions when ground truth is available, writes every
/// requested report file into cfg.out_dir (report.json, report.csv,
/// scatter.svg), and returns the report. Nothing is written until the
/// run has succeeded.
Report run_experiment(const ExperimentConfig& cfg);

}  // namespace dlcda
