#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "dlcda/experiment.hpp"
#include "dlcda/scatter.hpp"
#include "oracles.hpp"

using dlcda::ExperimentConfig;
using dlcda::Matrix;
using nlohmann::json;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("dlcda_experiment_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(bool(in));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// report.json with the timing line blanked, for byte comparisons.
std::string strip_timing(std::string text) {
  const auto at = text.find("\"wall_clock_ms\"");
  REQUIRE(at != std::string::npos);
  const auto end = text.find('\n', at);
  text.erase(at, end - at);
  return text;
}

// A fast synthetic experiment: tiny sample count, rbf kernel (the
// two-dimensional four-class data cannot hold a k >= 4 primal basis).
ExperimentConfig small_synthetic(const std::string& out_dir) {
  ExperimentConfig cfg;
  cfg.task = "toy";
  cfg.synthetic = dlcda::SyntheticConfig{};
  cfg.synthetic->samples_per_class = 8;
  cfg.solver.k = 4;
  cfg.solver.alpha = 200.0;  // tiny classes make the default indefinite
  cfg.solver.outer_iters = 2;
  cfg.solver.inner_iters = 3;
  cfg.solver.kernel = dlcda::KernelKind::rbf;
  cfg.out_dir = out_dir;
  return cfg;
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("variant and kernel names round-trip") {
  for (const char* name : {"full", "dda", "lcr"}) {
    CHECK(dlcda::to_string(dlcda::parse_variant(name)) == name);
  }
  for (const char* name : {"none", "linear", "rbf"}) {
    CHECK(dlcda::to_string(dlcda::parse_kernel(name)) == name);
  }
  CHECK_THROWS_AS(dlcda::parse_variant("bogus"), dlcda::ConfigError);
  CHECK_THROWS_AS(dlcda::parse_kernel("poly"), dlcda::ConfigError);
}

TEST_CASE("minimal synthetic config parses with defaults") {
  const ExperimentConfig cfg =
      dlcda::parse_experiment_config(json::parse(R"({"synthetic": {}})"));
  REQUIRE(cfg.synthetic.has_value());
  CHECK(cfg.synthetic->samples_per_class == 100);
  CHECK(cfg.solver.k == 100);
  CHECK(cfg.solver.alpha == 1.0);
  CHECK(cfg.solver.beta == 1.1);
  CHECK(cfg.solver.outer_iters == 10);
  CHECK(cfg.formats == std::vector<std::string>{"json"});
  CHECK(cfg.standardize == false);
}

TEST_CASE("config validation rejects bad documents") {
  using dlcda::parse_experiment_config;
  CHECK_THROWS_AS(parse_experiment_config(json::parse("[1,2]")),
                  dlcda::ConfigError);
  // unknown keys anywhere
  CHECK_THROWS_AS(
      parse_experiment_config(json::parse(R"({"synthetic":{}, "oops": 1})")),
      dlcda::ConfigError);
  CHECK_THROWS_AS(parse_experiment_config(
                      json::parse(R"({"synthetic":{"spc": 8}})")),
                  dlcda::ConfigError);
  // data source must be exactly one of synthetic / files
  CHECK_THROWS_AS(parse_experiment_config(json::parse("{}")),
                  dlcda::ConfigError);
  CHECK_THROWS_AS(
      parse_experiment_config(json::parse(
          R"({"synthetic":{}, "source":{"features":"a","labels":"b"}})")),
      dlcda::ConfigError);
  CHECK_THROWS_AS(
      parse_experiment_config(
          json::parse(R"({"source":{"features":"a","labels":"b"}})")),
      dlcda::ConfigError);
  // source labels are mandatory, target labels optional
  CHECK_THROWS_AS(
      parse_experiment_config(json::parse(
          R"({"source":{"features":"a"}, "target":{"features":"c"}})")),
      dlcda::ConfigError);
  CHECK_NOTHROW(parse_experiment_config(json::parse(
      R"({"source":{"features":"a","labels":"b"},
          "target":{"features":"c"}})")));
  // solver ranges
  CHECK_THROWS_AS(
      parse_experiment_config(
          json::parse(R"({"synthetic":{}, "solver":{"k": 0}})")),
      dlcda::ConfigError);
  CHECK_THROWS_AS(
      parse_experiment_config(
          json::parse(R"({"synthetic":{}, "solver":{"gamma": -1.0}})")),
      dlcda::ConfigError);
  CHECK_THROWS_AS(
      parse_experiment_config(
          json::parse(R"({"synthetic":{}, "solver":{"variant": "x"}})")),
      dlcda::ConfigError);
  // formats
  CHECK_THROWS_AS(
      parse_experiment_config(
          json::parse(R"({"synthetic":{}, "formats": []})")),
      dlcda::ConfigError);
  CHECK_THROWS_AS(
      parse_experiment_config(
          json::parse(R"({"synthetic":{}, "formats": ["pdf"]})")),
      dlcda::ConfigError);
  // synthetic invariants
  CHECK_THROWS_AS(
      parse_experiment_config(
          json::parse(R"({"synthetic":{"samples_per_class": 3}})")),
      dlcda::ConfigError);
}

TEST_CASE("config echo reproduces the configuration") {
  ExperimentConfig cfg = small_synthetic("somewhere");
  cfg.seed = 9;
  cfg.formats = {"json", "csv"};
  const nlohmann::ordered_json echo = dlcda::config_to_json(cfg);
  const ExperimentConfig back = dlcda::parse_experiment_config(echo);
  CHECK(dlcda::config_to_json(back) == echo);
  CHECK(back.task == cfg.task);
  CHECK(back.seed == cfg.seed);
  CHECK(back.solver.k == cfg.solver.k);
  CHECK(back.solver.kernel == cfg.solver.kernel);
  CHECK(back.synthetic->samples_per_class ==
        cfg.synthetic->samples_per_class);
  CHECK(back.formats == cfg.formats);
}

TEST_CASE("load_experiment_config reports file problems") {
  CHECK_THROWS_AS(dlcda::load_experiment_config("/nonexistent/cfg.json"),
                  dlcda::ConfigError);
  TempDir dir;
  const std::string path = dir.file("broken.json");
  std::ofstream(path) << "{ not json";
  CHECK_THROWS_AS(dlcda::load_experiment_config(path), dlcda::ConfigError);
}

TEST_CASE("run_experiment writes the requested reports") {
  TempDir dir;
  ExperimentConfig cfg = small_synthetic(dir.file("out"));
  cfg.formats = {"json", "csv", "svg"};
  const dlcda::Report report = dlcda::run_experiment(cfg);

  CHECK(report.iterations == 2);
  CHECK(report.objective.size() == 2);
  CHECK(report.target_accuracy.size() == 2);
  REQUIRE(report.final_accuracy.has_value());
  CHECK(*report.final_accuracy == report.target_accuracy.back());
  CHECK(report.tool_version == std::string("0.1.0"));
  CHECK(report.gamma > 0.0);  // median heuristic resolved

  const json doc = json::parse(read_file(dir.file("out/report.json")));
  CHECK(doc.at("task") == "toy");
  CHECK(doc.at("variant") == "full");
  CHECK(doc.at("per_iteration").at("objective").size() == 2);
  CHECK(doc.at("final_accuracy").is_number());
  CHECK(doc.at("hyper_parameters").at("k") == 4);
  CHECK(doc.at("config").at("solver").at("kernel") == "rbf");

  const std::string csv = read_file(dir.file("out/report.csv"));
  CHECK(csv.rfind("iteration,objective,target_accuracy\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);

  const std::string svg = read_file(dir.file("out/scatter.svg"));
  CHECK(svg.find("<svg") != std::string::npos);
  // four classes in two domains
  for (int c = 1; c <= 4; ++c) {
    CHECK(svg.find("class " + std::to_string(c) + " (source)") !=
          std::string::npos);
    CHECK(svg.find("class " + std::to_string(c) + " (target)") !=
          std::string::npos);
  }
}

TEST_CASE("run_experiment leaves nothing behind on data errors") {
  TempDir dir;
  ExperimentConfig cfg;
  cfg.source = dlcda::FileSpec{dir.file("missing.csv"),
                               dir.file("missing_labels.txt"),
                               dlcda::FeatureFormat::csv};
  cfg.target =
      dlcda::FileSpec{dir.file("missing_t.csv"), std::nullopt,
                      dlcda::FeatureFormat::csv};
  cfg.out_dir = dir.file("never");
  CHECK_THROWS_AS(dlcda::run_experiment(cfg), dlcda::DataError);
  CHECK(!std::filesystem::exists(dir.file("never")));
}

TEST_CASE("run_experiment rejects undersized k before running") {
  TempDir dir;
  ExperimentConfig cfg = small_synthetic(dir.file("out"));
  cfg.solver.k = 2;  // four synthetic classes
  CHECK_THROWS_AS(dlcda::run_experiment(cfg), dlcda::ConfigError);
  CHECK(!std::filesystem::exists(dir.file("out")));
}

TEST_CASE("identical config and seed give identical reports") {
  TempDir dir;
  ExperimentConfig cfg = small_synthetic(dir.file("a"));
  const dlcda::Report first = dlcda::run_experiment(cfg);
  const std::string a = read_file(dir.file("a/report.json"));
  cfg.out_dir = dir.file("b");
  const dlcda::Report second = dlcda::run_experiment(cfg);
  std::string b = read_file(dir.file("b/report.json"));
  // out_dir differs inside the config echo; normalize it before comparing
  const std::string needle = dir.file("b");
  const auto at = b.find(needle);
  REQUIRE(at != std::string::npos);
  b.replace(at, needle.size(), dir.file("a"));
  CHECK(strip_timing(a) == strip_timing(b));
  CHECK(first.objective == second.objective);
  CHECK(first.target_accuracy == second.target_accuracy);
}

TEST_CASE("seed changes the synthetic draw") {
  TempDir dir;
  ExperimentConfig cfg = small_synthetic(dir.file("a"));
  const dlcda::Report first = dlcda::run_experiment(cfg);
  cfg.seed = 1;
  cfg.out_dir = dir.file("b");
  const dlcda::Report second = dlcda::run_experiment(cfg);
  CHECK(first.objective != second.objective);
}

TEST_CASE("file-based experiment round-trips through loaders") {
  TempDir dir;
  testing::Gen gen(90);
  // two separated blobs per domain in 3-D
  const auto emit = [&](const std::string& stem, double shift) {
    Matrix F(3, 12);
    std::vector<int> labels;
    for (int i = 0; i < 12; ++i) {
      const int c = i < 6 ? 1 : 2;
      for (int r = 0; r < 3; ++r) {
        F(r, i) = (c == 1 ? 0.0 : 8.0) + shift + 0.3 * gen.normal();
      }
      labels.push_back(c);
    }
    dlcda::save_features_csv(F, dir.file(stem + ".csv"));
    dlcda::save_labels(labels, dir.file(stem + ".labels"));
  };
  emit("src", 0.0);
  emit("tgt", 0.7);

  ExperimentConfig cfg;
  cfg.task = "files";
  cfg.source = dlcda::FileSpec{dir.file("src.csv"), dir.file("src.labels"),
                               dlcda::FeatureFormat::csv};
  cfg.target = dlcda::FileSpec{dir.file("tgt.csv"), dir.file("tgt.labels"),
                               dlcda::FeatureFormat::csv};
  cfg.solver.k = 2;
  cfg.solver.outer_iters = 2;
  cfg.standardize = true;
  cfg.out_dir = dir.file("out");
  const dlcda::Report report = dlcda::run_experiment(cfg);
  REQUIRE(report.final_accuracy.has_value());
  CHECK(*report.final_accuracy >= 0.5);
  CHECK(std::filesystem::exists(dir.file("out/report.json")));
}

TEST_CASE("scatter output is deterministic and handles one sample") {
  TempDir dir;
  testing::Gen gen(91);
  const Matrix Z = gen.matrix(3, 7);
  const std::vector<int> ls = {1, 2, 1, 2};
  const std::vector<int> lt = {1, 2, 2};
  dlcda::emit_scatter(Z, ls, lt, dir.file("a.svg"));
  dlcda::emit_scatter(Z, ls, lt, dir.file("b.svg"));
  CHECK(read_file(dir.file("a.svg")) == read_file(dir.file("b.svg")));

  Matrix one(2, 1);
  one << 0.5, -0.25;
  dlcda::emit_scatter(one, {1}, {}, dir.file("one.svg"));
  const std::string svg = read_file(dir.file("one.svg"));
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("<circle") != std::string::npos);

  CHECK_THROWS_AS(
      dlcda::emit_scatter(Matrix::Zero(1, 2), {1}, {1}, dir.file("x.svg")),
      dlcda::DimensionMismatch);
  CHECK_THROWS_AS(
      dlcda::emit_scatter(Z, {1, 2}, {1}, dir.file("x.svg")),
      dlcda::LengthMismatch);
}

}  // TEST_SUITE
