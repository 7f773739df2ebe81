#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "momf/engine.hpp"
#include "momf/problems.hpp"

namespace momf::bench {

struct TracePoint {
  double cost = 0.0;
  double hv_fraction = 0.0;
};

/// Hypervolume fraction of the GP-predicted front versus cumulative cost.
struct HvTrace {
  std::string algorithm;
  int trial = 0;
  std::vector<TracePoint> points;
};

inline constexpr std::size_t kFirstTracedObservation = 4;
inline constexpr double kMaxHvFraction = 1.05;

/// For every prefix of at least four observations: condition one GP per
/// objective (reusing the trial's fitted hyperparameters when available),
/// predict means at `test_points` random inputs at s = 1, and divide the
/// hypervolume of their nondominated subset by the oracle hypervolume.
/// Throws std::invalid_argument for an empty trial.
HvTrace hv_trace(const engine::TrialRecord& trial, const problems::Problem& problem,
                 const problems::OracleFront& oracle, int test_points, std::uint64_t seed);

struct FidelityStats {
  std::vector<int> histogram;
  double mean = 0.0;
  std::size_t count = 0;
  /// Fraction of points with s in [0, 0.1] or [0.9, 1].
  double outer_fraction = 0.0;
};

/// Fidelities selected after initialization. Requires bins >= 2.
FidelityStats fidelity_stats(const Dataset& data, int bins);

struct AlgorithmSummary {
  std::vector<double> mean_curve;               // on BenchReport::cost_grid
  std::vector<std::optional<double>> trial_cost_to_threshold;
  std::optional<double> mean_cost_to_threshold; // over trials that reached it
  int trials_reached = 0;
  std::optional<double> curve_cost_to_threshold;
  double final_mean_hv = 0.0;
};

struct BenchReport {
  double threshold = 0.9;
  std::string baseline = "sf-ehvi";
  std::vector<double> cost_grid;
  std::map<std::string, AlgorithmSummary> algorithms;
  /// baseline mean cost-to-threshold / algorithm mean cost-to-threshold.
  std::map<std::string, double> reduction_factors;
  /// Same ratio using first crossings of the mean curves.
  std::map<std::string, double> curve_reduction_factors;
  std::vector<std::string> diagnostics;
};

inline constexpr int kCostGridSize = 200;

/// Mean curves on a shared log-spaced grid (last value carried forward,
/// zero before a trace's first point) and cost-reduction factors against the
/// baseline. Order of traces within an algorithm does not affect the result.
BenchReport aggregate(const std::map<std::string, std::vector<HvTrace>>& traces, double threshold,
                      const std::string& baseline = "sf-ehvi");

/// Trace value at `cost` (last observation carried forward; 0 before the first point).
double value_at(const HvTrace& trace, double cost);

}  // namespace momf::bench
