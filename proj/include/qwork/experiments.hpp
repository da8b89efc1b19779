#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

// Experiment runner backing the qwork-lab CLI: a registry of named
// experiments with parameter schemas, validation, deterministic CSV/JSON
// artifacts, and built-in pass/fail checks.
namespace qwork::experiments {

struct ParamSpec {
  std::string key;
  std::string description;
  double default_value = 0.0;
  bool required = false;  // must be supplied by file or command line
};

// Raw configuration: file values overridden by command-line values.
struct ExperimentConfig {
  std::string experiment;
  std::map<std::string, std::string> values;
  std::string out_dir;  // empty -> env QWORK_OUT_ROOT or ./qwork-runs
};

struct ResolvedConfig {
  std::string experiment;
  std::map<std::string, double> params;
  std::string out_dir;

  double at(const std::string& key) const;
  std::size_t count(const std::string& key) const;  // param as a count
  std::uint64_t seed(const std::string& key = "seed") const;
};

// Numeric table serialized as CSV with full-precision scientific cells.
struct ResultTable {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::string to_csv() const;
};

struct Outcome {
  bool passed = false;
  nlohmann::json summary;
  std::vector<ResultTable> tables;
  std::vector<std::pair<std::string, nlohmann::json>> reports;  // extra JSON files
  std::vector<std::string> notes;
};

struct Experiment {
  std::string name;
  std::string description;
  std::vector<ParamSpec> params;
  std::function<Outcome(const ResolvedConfig&)> run;
};

const std::vector<Experiment>& registry();
const Experiment* find(const std::string& name);

// Schema diagnostics; empty means valid.
std::vector<std::string> validate(const ExperimentConfig& config);

// Applies defaults and parses values; throws std::invalid_argument carrying
// the first diagnostic if validation fails.
ResolvedConfig resolve(const ExperimentConfig& config);

Outcome run(const ResolvedConfig& config);

// Writes config echo, tables, reports, and summary.json into
// <out_root>/<experiment>/; returns the directory. CSV bytes are
// deterministic; timestamps only appear in summary.json metadata.
std::string write_outputs(const ResolvedConfig& config, const Outcome& outcome);

// Flat key = value file; '#' starts a comment.
ExperimentConfig parse_config_file(const std::string& path);

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kOutRootEnv = "QWORK_OUT_ROOT";

}  // namespace qwork::experiments
