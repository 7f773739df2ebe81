#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "momf/pareto.hpp"
#include "momf/problems.hpp"

using namespace momf;
using namespace momf::problems;

namespace {

constexpr double kPi = std::numbers::pi;

// Classical Branin on [-5,10] x [0,15], written from the textbook constants.
double classical_branin(double u, double v) {
  const double a = 1.0, b = 5.1 / (4 * kPi * kPi), c = 5 / kPi, r = 6, s = 10, t = 1 / (8 * kPi);
  return a * std::pow(v - b * u * u + c * u - r, 2) + s * (1 - t) * std::cos(u) + s;
}

}  // namespace

TEST_CASE("forrester values") {
  CHECK(forrester(1.0 / 3.0) == doctest::Approx(7.025));
  CHECK(forrester(0.0) == doctest::Approx(10.0522).epsilon(1e-4));
  CHECK(forrester_mf(1.0 / 6.0, 1.0) == doctest::Approx(14.9478).epsilon(1e-4));
  CHECK_THROWS_AS(forrester_mf(1.2, 0.5), std::invalid_argument);
}

TEST_CASE("branin-currin values") {
  const Vector opt{(kPi + 5) / 15, 2.275 / 15};
  CHECK(branin_currin_mf(opt, 1.0)[0] == doctest::Approx(-0.39789).epsilon(1e-4));
  CHECK(branin_currin_mf(Vector{0, 0}, 1.0)[0] == doctest::Approx(-308.13).epsilon(1e-4));
  CHECK(branin_currin_mf(Vector{0.5, 0.5}, 1.0)[1] == doctest::Approx(-1868.5 / 159.5).epsilon(1e-6));
  CHECK(branin_currin_mf(Vector{0.5, 0.5}, 1.0)[1] == doctest::Approx(-11.7147).epsilon(1e-4));
  CHECK_THROWS_AS(branin_currin_mf(Vector{0.5}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(branin_currin_mf(Vector{0.5, 0.5}, -0.1), std::invalid_argument);
}

TEST_CASE("modified Branin at s = 1 is the negated classical Branin") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 100; ++i) {
    const Vector x{u(rng), u(rng)};
    CHECK(std::abs(branin_currin_mf(x, 1.0)[0] + classical_branin(15 * x[0] - 5, 15 * x[1])) < 1e-9);
  }
}

TEST_CASE("park transform and values") {
  CHECK(park_transform(Vector{0.6, 0.2, 0.5, 0.8})[0] == doctest::Approx(1.0));
  double lowest = 1e9;
  for (int i = 0; i <= 1000; ++i) lowest = std::min(lowest, park_transform(Vector{i / 1000.0, 0, 0, 0})[0]);
  CHECK(lowest >= 0.28 - 1e-12);

  // Second derivation of P2 at s = 1 from the transformed point (1, 0.5, 1, 1).
  const double x1 = 1.0, x2 = 0.5, x3 = 1.0, x4 = 1.0;
  const double expected = (5.0 - 2.0 / 3.0 * std::exp(x1 + x2) - x4 * std::sin(x3) + x3) / 4.0 - 0.7;
  CHECK(park_mf(Vector{0.6, 0.5, 0.5, 0.8}, 1.0)[1] == doctest::Approx(expected).epsilon(1e-9));
  CHECK(std::abs(park_mf(Vector{0.6, 0.5, 0.5, 0.8}, 1.0)[1] - -0.157315) < 1e-6);

  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 1000; ++i) {
    const auto y = park_mf(Vector{u(rng), u(rng), u(rng), u(rng)}, u(rng));
    REQUIRE(std::isfinite(y[0]));
    REQUIRE(std::isfinite(y[1]));
  }
}

TEST_CASE("cost model") {
  CHECK(cost(CostModel{4.8}, 0.0) == doctest::Approx(1.0));
  CHECK(cost(CostModel{4.8}, 1.0) == doctest::Approx(121.51).epsilon(1e-4));
  CHECK(cost(CostModel{5.0}, 1.0) == doctest::Approx(148.41).epsilon(1e-4));
  CHECK(cost(CostModel{4.8, 2.0}, 0.0) == doctest::Approx(3.0));
}

TEST_CASE("problems are deterministic and normalized") {
  for (auto name : kProblemNames) {
    const auto p = make_problem(name);
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 50000; ++i) {
      Vector x(static_cast<std::size_t>(p.input_dim));
      for (auto& v : x) v = u(rng);
      const double s = u(rng);
      const auto y = p.evaluate_normalized(x, s);
      if (i < 100) CHECK(y == p.evaluate_normalized(x, s));
      for (double v : y) REQUIRE((v >= -0.05 && v <= 1.05));
    }
  }
  CHECK_THROWS_AS(make_problem("zdt1"), std::invalid_argument);
}

TEST_CASE("oracle front") {
  const auto p = make_problem("branin-currin");
  const auto a = oracle_front(p, 10000, 1);
  const auto b = oracle_front(p, 10000, 2);
  CHECK(a.hypervolume > 0.0);
  CHECK(std::abs(a.hypervolume - b.hypervolume) <= 0.02 * a.hypervolume);
  for (std::size_t i = 0; i < a.front.size(); ++i)
    for (std::size_t j = 0; j < a.front.size(); ++j) REQUIRE_FALSE(pareto::dominates(a.front[i], a.front[j]));
  for (const auto& x : a.sample_inputs) {
    const auto y = p.evaluate_normalized(x, 1.0);
    if (y[0] > 0 && y[1] > 0) REQUIRE(a.hypervolume >= y[0] * y[1] - 1e-12);
  }
  CHECK_THROWS_AS(oracle_front(p, 999, 1), std::invalid_argument);
}
