#pragma once

#include <span>
#include <vector>

#include "momf/types.hpp"

namespace momf::pareto {

/// True iff a >= b in every coordinate and a > b in at least one
/// (maximization). Throws std::invalid_argument on a dimension mismatch.
bool dominates(std::span<const double> a, std::span<const double> b);

/// True iff every coordinate of p is strictly greater than the reference.
bool beats_reference(std::span<const double> p, std::span<const double> reference);

/// Maximal subset not dominated by any input point; exact duplicates collapse
/// to a single representative. Output is sorted lexicographically.
std::vector<Vector> nondominated(std::span<const Vector> points);

/// Mutually nondominated points that all strictly dominate a reference point.
class ParetoFront {
 public:
  explicit ParetoFront(Vector reference);
  /// Filters `points` to its nondominated subset. Throws std::invalid_argument
  /// if a surviving point does not dominate the reference.
  ParetoFront(std::span<const Vector> points, Vector reference);

  /// Same as the constructor but silently drops points that fail the
  /// reference condition.
  static ParetoFront clipped(std::span<const Vector> points, Vector reference);

  [[nodiscard]] const std::vector<Vector>& points() const { return points_; }
  [[nodiscard]] const Vector& reference() const { return reference_; }
  [[nodiscard]] std::size_t dim() const { return reference_.size(); }
  [[nodiscard]] std::size_t size() const { return points_.size(); }
  [[nodiscard]] bool empty() const { return points_.empty(); }

  /// True if some member weakly dominates y (>= in every coordinate).
  [[nodiscard]] bool covers(std::span<const double> y) const;

 private:
  std::vector<Vector> points_;
  Vector reference_;
};

/// Exact volume of the region dominated by `points` and bounded below by
/// `reference`. Dominated or duplicate inputs are tolerated. Throws
/// std::invalid_argument if any point fails to dominate the reference.
double hypervolume(std::span<const Vector> points, std::span<const double> reference);

double hypervolume(const ParetoFront& front);

/// HV(front + y) - HV(front). Zero when y is weakly dominated by the front or
/// fails the reference condition.
double hvi(const ParetoFront& front, std::span<const double> y);

}  // namespace momf::pareto
