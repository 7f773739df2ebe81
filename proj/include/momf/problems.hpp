#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "momf/cost_model.hpp"
#include "momf/types.hpp"

namespace momf::problems {

/// Per-objective affine map raw -> (raw - offset) / scale.
struct Normalization {
  Vector offset;
  Vector scale;

  [[nodiscard]] Vector apply(std::span<const double> raw) const;
};

/// A multi-fidelity, multi-objective test function with its cost model.
struct Problem {
  std::string name;
  int input_dim = 0;
  int objective_count = 0;
  std::function<Vector(std::span<const double>, double)> function;
  CostModel cost_model;
  Normalization normalization;

  /// Raw objective values. Throws std::invalid_argument outside [0,1]^d x [0,1].
  [[nodiscard]] Vector evaluate(std::span<const double> x, double s) const;
  [[nodiscard]] Vector evaluate_normalized(std::span<const double> x, double s) const;
};

inline constexpr std::array<std::string_view, 3> kProblemNames = {"forrester", "branin-currin", "park"};

/// Looks a problem up by name. Throws std::invalid_argument for unknown names.
Problem make_problem(std::string_view name, const CostModel& cost_model = {});

// Forrester base function (6x-2)^2 sin(12x-4) + 7.025.
double forrester(double x);
double forrester_mf(double x, double s);

/// (Branin, Currin), both negated for maximization; raw values.
std::array<double, 2> branin_currin_mf(std::span<const double> x, double s);

std::array<double, 4> park_transform(std::span<const double> x);
/// (P1, P2) on the transformed inputs.
std::array<double, 2> park_mf(std::span<const double> x, double s);

/// Min/max affine map estimated from `n` uniform samples over inputs and
/// fidelity. Used to derive the frozen constants in make_problem.
Normalization estimate_normalization(const Problem& problem, int n, std::uint64_t seed);

struct OracleFront {
  std::vector<Vector> sample_inputs;     // inputs evaluated at s = 1
  std::vector<Vector> front;             // normalized nondominated objective vectors
  double hypervolume = 0.0;              // w.r.t. the zero reference point
};

/// Dense random sample at the target fidelity. Requires n >= 1000.
OracleFront oracle_front(const Problem& problem, int n, std::uint64_t seed);

}  // namespace momf::problems
