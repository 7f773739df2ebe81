#pragma once

#include <cmath>
#include <stdexcept>

namespace momf {

/// Evaluation cost as a function of fidelity: fixed_cost + exp(a * s).
struct CostModel {
  double coefficient = 4.8;
  double fixed_cost = 0.0;

  [[nodiscard]] double operator()(double s) const { return fixed_cost + std::exp(coefficient * s); }
};

inline double cost(const CostModel& model, double s) { return model(s); }

}  // namespace momf
