#include <random>

#include "doctest.h"
#include "momf/pareto.hpp"
#include "oracles.hpp"

using namespace momf;
using namespace momf::pareto;

namespace {

std::vector<Vector> random_points(std::mt19937_64& rng, int n, int k, double lo = 0.05, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<Vector> pts(static_cast<std::size_t>(n), Vector(static_cast<std::size_t>(k)));
  for (auto& p : pts)
    for (auto& v : p) v = u(rng);
  return pts;
}

// Points on the positive quadrant of a sphere: all mutually nondominated.
std::vector<Vector> random_front(std::mt19937_64& rng, int n, int k) {
  std::normal_distribution<double> z;
  std::vector<Vector> pts;
  for (int i = 0; i < n; ++i) {
    Vector p(static_cast<std::size_t>(k));
    double norm = 0.0;
    for (auto& v : p) {
      v = std::abs(z(rng)) + 1e-3;
      norm += v * v;
    }
    for (auto& v : p) v /= std::sqrt(norm);
    pts.push_back(p);
  }
  return pts;
}

}  // namespace

TEST_CASE("dominates") {
  CHECK(dominates(Vector{2, 2}, Vector{1, 1}));
  CHECK_FALSE(dominates(Vector{1, 2}, Vector{2, 1}));
  CHECK_FALSE(dominates(Vector{1, 1}, Vector{1, 1}));
  CHECK(dominates(Vector{1, 2}, Vector{1, 1}));
  CHECK_THROWS_AS(dominates(Vector{1, 2}, Vector{1}), std::invalid_argument);
}

TEST_CASE("nondominated examples") {
  const std::vector<Vector> pts{{1, 2}, {2, 1}, {0.5, 0.5}};
  CHECK(nondominated(pts) == std::vector<Vector>{{1, 2}, {2, 1}});
  CHECK(nondominated(std::vector<Vector>{{3, 4}}) == std::vector<Vector>{{3, 4}});
  CHECK(nondominated(std::vector<Vector>{}).empty());
  CHECK(nondominated(std::vector<Vector>{{1, 1}, {1, 1}}).size() == 1);
}

TEST_CASE("nondominated matches brute force and is idempotent") {
  std::mt19937_64 rng(17);
  for (int k = 2; k <= 4; ++k) {
    for (int rep = 0; rep < 10; ++rep) {
      auto pts = random_points(rng, 100, k);
      pts.push_back(pts[3]);
      const auto fast = nondominated(pts);
      CHECK(fast == oracle::brute_nondominated(pts));
      CHECK(nondominated(fast) == fast);
    }
  }
}

TEST_CASE("hypervolume hand examples") {
  const Vector ref{0, 0};
  CHECK(hypervolume(std::vector<Vector>{{0.5, 0.5}}, ref) == doctest::Approx(0.25));
  CHECK(hypervolume(std::vector<Vector>{{1, 2}, {2, 1}}, ref) == doctest::Approx(3.0));
  const std::vector<Vector> three{{2, 1}, {1.5, 1.5}, {1, 2}};
  CHECK(hypervolume(three, ref) == doctest::Approx(3.25));
  const auto mc = oracle::mc_hypervolume(three, ref, 1000000, 5);
  CHECK(std::abs(mc.value - 3.25) < 0.01 * 3.25);
  CHECK_THROWS_AS(hypervolume(std::vector<Vector>{{1, -1}}, ref), std::invalid_argument);
}

TEST_CASE("hypervolume matches inclusion-exclusion in 2 to 4 dimensions") {
  std::mt19937_64 rng(23);
  for (int k = 2; k <= 4; ++k) {
    for (int rep = 0; rep < 20; ++rep) {
      const auto pts = random_points(rng, 10, k);
      const Vector ref(static_cast<std::size_t>(k), 0.0);
      const auto front = oracle::brute_nondominated(pts);
      CHECK(hypervolume(pts, ref) == doctest::Approx(oracle::inclusion_exclusion_hv(front, ref)).epsilon(1e-10));
    }
  }
}

TEST_CASE("hypervolume agrees with Monte-Carlo in 2-D and 3-D") {
  std::mt19937_64 rng(29);
  for (int k = 2; k <= 3; ++k) {
    for (int rep = 0; rep < 20; ++rep) {
      const auto pts = random_front(rng, 12, k);
      const Vector ref(static_cast<std::size_t>(k), 0.0);
      const auto mc = oracle::mc_hypervolume(pts, ref, 1000000, 100 + static_cast<std::uint64_t>(rep));
      CHECK(std::abs(hypervolume(pts, ref) - mc.value) <= 3 * mc.standard_error);
    }
  }
}

TEST_CASE("hypervolume is monotone under insertion") {
  std::mt19937_64 rng(31);
  for (int k = 2; k <= 3; ++k) {
    const Vector ref(static_cast<std::size_t>(k), 0.0);
    std::vector<Vector> pts;
    double prev = 0.0;
    for (const auto& p : random_points(rng, 1000, k)) {
      pts.push_back(p);
      if (pts.size() % 50 != 0 && k == 3) continue;
      const double hv = hypervolume(pts, ref);
      CHECK(hv >= prev - 1e-12);
      prev = hv;
    }
  }
}

TEST_CASE("hvi examples and zero set") {
  const Vector ref{0, 0};
  CHECK(hvi(ParetoFront(std::vector<Vector>{{1, 1}}, ref), Vector{2, 2}) == doctest::Approx(3.0));
  const ParetoFront two(std::vector<Vector>{{2, 2}}, ref);
  CHECK(hvi(two, Vector{1, 1}) == 0.0);
  CHECK(hvi(two, Vector{2, 2}) == 0.0);
  CHECK(hvi(two, Vector{3, -0.5}) == 0.0);
  CHECK(hvi(ParetoFront(ref), Vector{1, 1}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(hvi(two, Vector{1, 1, 1}), std::invalid_argument);
}

TEST_CASE("hvi equals hypervolume difference") {
  std::mt19937_64 rng(37);
  for (int k = 2; k <= 4; ++k) {
    const Vector ref(static_cast<std::size_t>(k), 0.0);
    for (int rep = 0; rep < 30; ++rep) {
      auto pts = random_points(rng, 8, k);
      const ParetoFront front(pts, ref);
      const auto y = random_points(rng, 1, k, -0.1, 1.1)[0];
      const double inc = hvi(front, y);
      CHECK(inc >= 0.0);
      if (beats_reference(y, ref)) {
        pts.push_back(y);
        CHECK(inc == doctest::Approx(hypervolume(pts, ref) - hypervolume(front)).epsilon(1e-9));
      }
      CHECK((inc == 0.0) == (front.covers(y) || !beats_reference(y, ref)));
    }
  }
}

TEST_CASE("front construction") {
  const Vector ref{0, 0};
  CHECK_THROWS_AS(ParetoFront(std::vector<Vector>{{1, 0}}, ref), std::invalid_argument);
  const auto clipped = ParetoFront::clipped(std::vector<Vector>{{1, 0}, {0.5, 0.5}, {0.2, 0.2}}, ref);
  CHECK(clipped.points() == std::vector<Vector>{{0.5, 0.5}});
}
