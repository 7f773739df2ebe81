#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "momf/engine.hpp"

namespace momf::config {

/// Invalid configuration. `line` is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, std::size_t line = 0);
  [[nodiscard]] std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// File-backed experiment description. Budgets and iteration caps may be
/// given per algorithm.
struct RunConfig {
  std::string problem;
  std::vector<engine::Algorithm> algorithms;
  std::map<engine::Algorithm, double> budget;
  std::map<engine::Algorithm, int> max_iterations;
  double cost_coefficient = 4.8;
  double fixed_cost = 0.0;
  int trials = 1;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> seeds;  // explicit per-trial seeds, overrides derivation
  std::optional<int> init_count;
  std::optional<int> mc_samples;
  std::optional<int> candidate_pool;
  std::optional<int> restarts;
  std::optional<int> gp_restarts;
  std::optional<int> mes_samples;
  acq::FidelityKind fidelity = acq::FidelityKind::linear;
  std::string output_dir = "momf_out";
  double threshold = 0.9;
  int test_points = 10000;
  int oracle_points = 10000;
  int histogram_bins = 10;

  [[nodiscard]] std::uint64_t trial_seed(int trial) const;
  [[nodiscard]] engine::LoopConfig loop_config(engine::Algorithm algorithm, int trial) const;
  [[nodiscard]] problems::Problem make_problem() const;
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Parses and validates a JSON document. Unknown keys and bad values raise
/// ConfigError naming the field and, where possible, its line in `text`.
RunConfig parse(const std::string& text);
RunConfig load(const std::string& path);

}  // namespace momf::config
