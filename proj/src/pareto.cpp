#include "momf/pareto.hpp"

#include <algorithm>
#include <iterator>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

namespace momf::pareto {

namespace {

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

// Dominated area of a 2-D point set, maintained under insertion.
// Stored front is sorted by x ascending (hence y descending); the area is
// sum_i (x_i - x_{i-1}) (y_i - r2) with x_0 = r1.
class Front2d {
 public:
  Front2d(double r1, double r2) : r1_(r1), r2_(r2) {}

  void insert(double x, double y) {
    auto it = front_.lower_bound(x);
    if (it != front_.end() && it->second >= y) return;
    if (it != front_.end() && it->first == x) it = erase(it);
    while (it != front_.begin()) {
      auto prev = std::prev(it);
      if (prev->second > y) break;
      erase(prev);
    }
    const double x_prev = it == front_.begin() ? r1_ : std::prev(it)->first;
    area_ += (x - x_prev) * (y - r2_);
    if (it != front_.end()) area_ -= (x - x_prev) * (it->second - r2_);
    front_.emplace_hint(it, x, y);
  }

  [[nodiscard]] double area() const { return area_; }

 private:
  using Map = std::map<double, double>;

  Map::iterator erase(Map::iterator it) {
    const double x_prev = it == front_.begin() ? r1_ : std::prev(it)->first;
    const double x_e = it->first;
    area_ -= (x_e - x_prev) * (it->second - r2_);
    auto next = front_.erase(it);
    if (next != front_.end()) area_ += (x_e - x_prev) * (next->second - r2_);
    return next;
  }

  Map front_;
  double r1_, r2_;
  double area_ = 0.0;
};

double hv2(std::vector<const double*> pts, const double* ref) {
  std::sort(pts.begin(), pts.end(), [](const double* a, const double* b) {
    return a[0] != b[0] ? a[0] > b[0] : a[1] > b[1];
  });
  double area = 0.0, max_y = ref[1];
  for (std::size_t i = 0; i < pts.size(); ++i) {
    max_y = std::max(max_y, pts[i][1]);
    const double next_x = i + 1 < pts.size() ? pts[i + 1][0] : ref[0];
    area += (pts[i][0] - next_x) * (max_y - ref[1]);
  }
  return area;
}

double hv3(std::vector<const double*> pts, const double* ref) {
  std::sort(pts.begin(), pts.end(), [](const double* a, const double* b) { return a[2] > b[2]; });
  Front2d slice(ref[0], ref[1]);
  double volume = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    slice.insert(pts[i][0], pts[i][1]);
    const double next_z = i + 1 < pts.size() ? pts[i + 1][2] : ref[2];
    volume += slice.area() * (pts[i][2] - next_z);
  }
  return volume;
}

// Slicing along the last objective, recursing until the 3-D sweep applies.
double hv_recursive(std::vector<const double*> pts, const double* ref, std::size_t k) {
  if (pts.empty()) return 0.0;
  if (k == 1) {
    double best = ref[0];
    for (const double* p : pts) best = std::max(best, p[0]);
    return best - ref[0];
  }
  if (k == 2) return hv2(std::move(pts), ref);
  if (k == 3) return hv3(std::move(pts), ref);
  std::sort(pts.begin(), pts.end(), [k](const double* a, const double* b) { return a[k - 1] > b[k - 1]; });
  double volume = 0.0;
  std::vector<const double*> active;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    active.push_back(pts[i]);
    const double next = i + 1 < pts.size() ? pts[i + 1][k - 1] : ref[k - 1];
    const double depth = pts[i][k - 1] - next;
    if (depth > 0.0) volume += hv_recursive(active, ref, k - 1) * depth;
  }
  return volume;
}

}  // namespace

bool dominates(std::span<const double> a, std::span<const double> b) {
  require_same_dim(a.size(), b.size());
  bool strictly = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
    if (a[i] > b[i]) strictly = true;
  }
  return strictly;
}

bool beats_reference(std::span<const double> p, std::span<const double> reference) {
  require_same_dim(p.size(), reference.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    if (!(p[i] > reference[i])) return false;
  return true;
}

std::vector<Vector> nondominated(std::span<const Vector> points) {
  if (points.empty()) return {};
  const std::size_t k = points.front().size();
  for (const auto& p : points) require_same_dim(p.size(), k);

  std::vector<const Vector*> order(points.size());
  std::transform(points.begin(), points.end(), order.begin(), [](const Vector& p) { return &p; });
  // Lexicographically descending: every dominator of p precedes p.
  std::sort(order.begin(), order.end(), [](const Vector* a, const Vector* b) { return *a > *b; });
  order.erase(std::unique(order.begin(), order.end(), [](const Vector* a, const Vector* b) { return *a == *b; }),
              order.end());

  std::vector<Vector> kept;
  if (k == 2) {
    double max_y = -std::numeric_limits<double>::infinity();
    for (const Vector* p : order) {
      if ((*p)[1] > max_y) {
        kept.push_back(*p);
        max_y = (*p)[1];
      }
    }
  } else {
    for (const Vector* p : order) {
      const bool dominated = std::any_of(kept.begin(), kept.end(), [&](const Vector& q) { return dominates(q, *p); });
      if (!dominated) kept.push_back(*p);
    }
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

ParetoFront::ParetoFront(Vector reference) : reference_(std::move(reference)) {
  if (reference_.empty()) throw std::invalid_argument("reference point must have at least one coordinate");
}

ParetoFront::ParetoFront(std::span<const Vector> points, Vector reference) : ParetoFront(std::move(reference)) {
  for (const auto& p : points) require_same_dim(p.size(), reference_.size());
  points_ = nondominated(points);
  for (const auto& p : points_)
    if (!beats_reference(p, reference_)) throw std::invalid_argument("front point does not dominate the reference point");
}

ParetoFront ParetoFront::clipped(std::span<const Vector> points, Vector reference) {
  std::vector<Vector> keep;
  for (const auto& p : points) {
    require_same_dim(p.size(), reference.size());
    if (beats_reference(p, reference)) keep.push_back(p);
  }
  return ParetoFront(keep, std::move(reference));
}

bool ParetoFront::covers(std::span<const double> y) const {
  require_same_dim(y.size(), dim());
  return std::any_of(points_.begin(), points_.end(), [&](const Vector& p) {
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i] < y[i]) return false;
    return true;
  });
}

double hypervolume(std::span<const Vector> points, std::span<const double> reference) {
  std::vector<const double*> pts;
  pts.reserve(points.size());
  for (const auto& p : points) {
    if (!beats_reference(p, reference)) throw std::invalid_argument("point does not dominate the reference point");
    pts.push_back(p.data());
  }
  return hv_recursive(std::move(pts), reference.data(), reference.size());
}

double hypervolume(const ParetoFront& front) { return hypervolume(front.points(), front.reference()); }

double hvi(const ParetoFront& front, std::span<const double> y) {
  require_same_dim(y.size(), front.dim());
  const auto& ref = front.reference();
  if (!beats_reference(y, ref) || front.covers(y)) return 0.0;

  const std::size_t k = ref.size();
  double box = 1.0;
  for (std::size_t i = 0; i < k; ++i) box *= y[i] - ref[i];
  if (front.empty()) return box;

  // HVI = vol([ref, y]) - HV of the front clipped to that box.
  std::vector<double> storage;
  storage.reserve(front.size() * k);
  std::vector<const double*> limited;
  for (const auto& p : front.points()) {
    bool inside = true;
    const std::size_t offset = storage.size();
    for (std::size_t i = 0; i < k; ++i) {
      const double v = std::min(p[i], y[i]);
      if (!(v > ref[i])) inside = false;
      storage.push_back(v);
    }
    if (!inside) storage.resize(offset);
  }
  for (std::size_t off = 0; off < storage.size(); off += k) limited.push_back(storage.data() + off);
  const double overlap = hv_recursive(std::move(limited), ref.data(), k);
  return std::max(box - overlap, 0.0);
}

}  // namespace momf::pareto
