#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace momf {

using Vector = std::vector<double>;

// Raised for malformed inputs such as non-finite training targets.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a numerical routine cannot produce a result
// (failed factorization, no finite acquisition value, zero cost).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One evaluation of a multi-fidelity problem.
struct Observation {
  Vector x;                     // input point in [0,1]^d
  double s = 1.0;               // fidelity in [0,1]
  Vector y_raw;                 // objective values as returned by the problem
  Vector y_normalized;          // y_raw after the problem's affine normalization
  double cost = 0.0;
  double cumulative_cost = 0.0;
  int iteration = 0;            // 0 for initialization points
};

/// Ordered evaluation history. Cumulative cost is strictly increasing.
struct Dataset {
  std::vector<Observation> observations;

  [[nodiscard]] std::size_t size() const { return observations.size(); }
  [[nodiscard]] bool empty() const { return observations.empty(); }
  [[nodiscard]] double total_cost() const {
    return observations.empty() ? 0.0 : observations.back().cumulative_cost;
  }
  [[nodiscard]] std::size_t input_dim() const {
    return observations.empty() ? 0 : observations.front().x.size();
  }
  [[nodiscard]] std::size_t objective_count() const {
    return observations.empty() ? 0 : observations.front().y_normalized.size();
  }

  /// Appends an observation, filling in its cumulative cost.
  void append(Observation obs) {
    obs.cumulative_cost = total_cost() + obs.cost;
    observations.push_back(std::move(obs));
  }

  /// First `n` observations as a new dataset.
  [[nodiscard]] Dataset prefix(std::size_t n) const {
    Dataset out;
    out.observations.assign(observations.begin(),
                            observations.begin() + static_cast<std::ptrdiff_t>(std::min(n, size())));
    return out;
  }
};

}  // namespace momf
