#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tfnn/io.hpp"
#include "tfnn/targets.hpp"

namespace tfnn {

// One experiment: a build/fit/verify verb plus its inputs.
struct ExperimentConfig {
  std::string name;
  std::string command;  // fit-univariate | build-shallow | build-lcs | build-functional
                        // | build-deep-narrow | build-ostrand | kst-features | eval | verify
  double eps = 0.0;
  std::uint64_t seed = 0;
  int grid = 33;
  json inputs;  // per-command parameters
};

struct SuiteRow {
  std::string experiment;
  int n = 0, m = 0, M = -1;
  int width = 0, depth = 0, term_count = 0;
  double sup_error = 0.0;
  double eps = 0.0;
  int budget_flag = 0;
  long long runtime_ms = 0;
  std::uint64_t seed = 0;
};

struct SuiteReport {
  std::vector<SuiteRow> rows;
  std::string csv() const;  // fixed schema, floats at 17 significant digits
};

std::vector<ExperimentConfig> parse_suite_config(const json& j);
json default_suite_config();  // the shipped nine-experiment suite

// Executes experiments in order, writing <name>.net.json / <name>.report.json
// artifacts under out_dir and collecting one CSV row each.
SuiteReport run_suite(const std::vector<ExperimentConfig>& experiments,
                      const std::string& out_dir);

struct VerifyResult {
  double sup_error = 0.0;
  int width = 0, depth = 0;
};

// Re-measures a saved network against a set file and a named target, using
// nothing but the artifacts.
VerifyResult verify_net(const std::string& net_file, const std::string& set_file,
                        const std::string& target_name);
VerifyResult verify_net_loaded(const AnyNet& net, const SampledCompactSet& set,
                               const std::string& target_name,
                               const std::vector<double>& domain_grid = {});

// Resolves the set an experiment runs over (space/grid/V-family inputs).
SampledCompactSet experiment_set(const ExperimentConfig& e, std::vector<double>* domain_grid);

std::string default_out_dir();  // TFNN_OUT_DIR or "./tfnn-out"

}  // namespace tfnn
