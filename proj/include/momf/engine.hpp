#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "momf/acquisition.hpp"
#include "momf/gp.hpp"
#include "momf/problems.hpp"
#include "momf/types.hpp"

namespace momf::engine {

enum class Algorithm { momf1, momf2, sf_ehvi };
enum class InitMode { cost_aware, fixed_high };

Algorithm parse_algorithm(std::string_view name);
std::string_view to_string(Algorithm algorithm);

struct LoopConfig {
  Algorithm algorithm = Algorithm::momf1;
  double total_budget = 0.0;
  int init_count = 5;
  InitMode init_mode = InitMode::cost_aware;
  int mc_samples = 128;
  int restarts = 10;
  int candidate_pool = 1024;
  acq::FidelityKind fidelity = acq::FidelityKind::linear;
  std::uint64_t seed = 0;
  int max_iterations = 0;   // 0: budget is the only stopping rule
  int mes_samples = 10;
  int gp_restarts = 8;

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

/// Defaults for an algorithm: sf-ehvi starts from one point at s = 1, the
/// multi-fidelity loops from five cost-aware points.
LoopConfig default_config(Algorithm algorithm);

struct TrialRecord {
  Algorithm algorithm = Algorithm::momf1;
  std::uint64_t seed = 0;
  Dataset data;
  /// Objective GP hyperparameters keyed by the number of observations they
  /// were fitted on.
  std::map<std::size_t, std::vector<gp::KernelParams>> fitted_params;
  bool aborted = false;
  std::string diagnostic;
};

/// Initial design. cost_aware draws s from p(s) ~ 1 / C(s) by inverse CDF on
/// a 1000-point grid; fixed_high pins every point to s = 1.
Dataset initialize(const problems::Problem& problem, int n, InitMode mode, std::uint64_t seed);

struct Bounds {
  Vector lower;
  Vector upper;
  static Bounds unit(std::size_t dim);
};

struct Candidate {
  Vector point;
  double value = 0.0;
};

/// Scores a random pool, refines the best `restarts` candidates by compass
/// search until the step drops below 1e-3, and returns the best point.
/// Non-finite scores are discarded; throws NumericError if every score is.
Candidate maximize_acquisition(const std::function<double(std::span<const double>)>& score, const Bounds& bounds,
                               int pool, int restarts, std::uint64_t seed);

/// Chooses a fidelity for a fixed input point in the two-step loop.
using FidelitySelector =
    std::function<double(std::span<const double> x, const Dataset& data, std::size_t iteration)>;

TrialRecord run_momf1(const problems::Problem& problem, const LoopConfig& config);
/// `selector` overrides the MF-MES fidelity step when set.
TrialRecord run_momf2(const problems::Problem& problem, const LoopConfig& config, const FidelitySelector& selector = {});
TrialRecord run_sf_ehvi(const problems::Problem& problem, const LoopConfig& config);
TrialRecord run_trial(const problems::Problem& problem, const LoopConfig& config);

/// Fits one GP per objective on `data`, reusing `warm` hyperparameters as the
/// first start when provided.
std::vector<gp::GpModel> fit_objectives(const Dataset& data, int gp_restarts, std::uint64_t seed,
                                        const std::vector<gp::KernelParams>* warm = nullptr);

/// Conditions one GP per objective on `data` with fixed hyperparameters.
std::vector<gp::GpModel> condition_objectives(const Dataset& data, const std::vector<gp::KernelParams>& params);

}  // namespace momf::engine
