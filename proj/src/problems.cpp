#include "momf/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "momf/pareto.hpp"
#include "momf/rng.hpp"

namespace momf::problems {

namespace {

constexpr double kPi = std::numbers::pi;

void check_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
}

void check_inputs(std::span<const double> x, std::size_t dim, double s) {
  if (x.size() != dim) throw std::invalid_argument("expected " + std::to_string(dim) + " input coordinates");
  for (double v : x) check_unit(v, "input");
  check_unit(s, "fidelity");
}

// Frozen min/max normalization, estimated with estimate_normalization(problem, 50000, 0).
Normalization frozen_normalization(std::string_view name) {
  if (name == "forrester") return {{2.2376210415251321}, {25.640432345889394}};
  if (name == "branin-currin") return {{-300.55352503503178, -13.798721637661615}, {300.13663791566495, 10.922714678338121}};
  return {{-0.56743297366237078, -0.6836943688501379}, {0.94997170814837772, 1.1369881421414432}};
}

}  // namespace

Vector Normalization::apply(std::span<const double> raw) const {
  if (raw.size() != offset.size()) throw std::invalid_argument("normalization dimension mismatch");
  Vector out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = (raw[i] - offset[i]) / scale[i];
  return out;
}

Vector Problem::evaluate(std::span<const double> x, double s) const {
  check_inputs(x, static_cast<std::size_t>(input_dim), s);
  return function(x, s);
}

Vector Problem::evaluate_normalized(std::span<const double> x, double s) const {
  return normalization.apply(evaluate(x, s));
}

double forrester(double x) {
  const double a = 6.0 * x - 2.0;
  return a * a * std::sin(12.0 * x - 4.0) + 7.025;
}

double forrester_mf(double x, double s) {
  check_unit(x, "input");
  check_unit(s, "fidelity");
  const double a = 0.5 + 0.5 * s;
  const double b = 2.0 - 2.0 * s;
  const double c = 5.0 * s - 5.0;
  const double d = 1.5 - 0.5 * s;
  constexpr double e = 25.0;
  const double shifted = x - 0.2 * (1.0 - x * s);
  const double g = a * forrester(shifted) + b * (x - 0.5) - c;
  return d * (e - g);
}

std::array<double, 2> branin_currin_mf(std::span<const double> x, double s) {
  check_inputs(x, 2, s);
  const double x1 = x[0], x2 = x[1];

  const double u = 15.0 * x1 - 5.0;
  const double v = 15.0 * x2;
  const double b = 5.1 / (4.0 * kPi * kPi) - 0.01 * (1.0 - s);
  const double c = 5.0 / kPi - 0.1 * (1.0 - s);
  const double t = 1.0 / (8.0 * kPi) + 0.05 * (1.0 - s);
  const double q = v - b * u * u + c * u - 6.0;
  const double branin = -(q * q + 10.0 * (1.0 - t) * std::cos(u) + 10.0);

  const double decay = x2 > 0.0 ? std::exp(-1.0 / (2.0 * x2)) : 0.0;
  const double num = ((2300.0 * x1 + 1900.0) * x1 + 2092.0) * x1 + 60.0;
  const double den = ((100.0 * x1 + 500.0) * x1 + 4.0) * x1 + 20.0;
  const double currin = -((1.0 - 0.1 * (1.0 - s) * decay) * num / den);
  return {branin, currin};
}

std::array<double, 4> park_transform(std::span<const double> x) {
  if (x.size() != 4) throw std::invalid_argument("park expects 4 input coordinates");
  return {1.0 - 2.0 * (x[0] - 0.6) * (x[0] - 0.6), x[1], 1.0 - 3.0 * (x[2] - 0.5) * (x[2] - 0.5),
          1.0 - (x[3] - 0.8) * (x[3] - 0.8)};
}

std::array<double, 2> park_mf(std::span<const double> x, double s) {
  check_inputs(x, 4, s);
  const auto [x1, x2, x3, x4] = park_transform(x);
  const double a = 0.9 + 0.1 * s;
  const double b = 0.1 * (1.0 - s);
  const double t1 = ((x1 + 0.001 * (1.0 - s)) / 2.0) * std::sqrt(1.0 + (x2 + x3 * x3) * x4 / (x1 * x1));
  const double t2 = (x1 + 3.0 * x4) * std::exp(1.0 + std::sin(x3));
  const double p1 = a * (t1 + t2 - b) / 22.0 - 0.8;
  const double p2 = a * (5.0 - (2.0 / 3.0) * std::exp(x1 + x2) - x4 * std::sin(x3 * a) + x3 - b) / 4.0 - 0.7;
  return {p1, p2};
}

Problem make_problem(std::string_view name, const CostModel& cost_model) {
  Problem p;
  p.name = std::string(name);
  p.cost_model = cost_model;
  if (name == "forrester") {
    p.input_dim = 1;
    p.objective_count = 1;
    p.function = [](std::span<const double> x, double s) { return Vector{forrester_mf(x[0], s)}; };
  } else if (name == "branin-currin") {
    p.input_dim = 2;
    p.objective_count = 2;
    p.function = [](std::span<const double> x, double s) {
      const auto v = branin_currin_mf(x, s);
      return Vector(v.begin(), v.end());
    };
  } else if (name == "park") {
    p.input_dim = 4;
    p.objective_count = 2;
    p.function = [](std::span<const double> x, double s) {
      const auto v = park_mf(x, s);
      return Vector(v.begin(), v.end());
    };
  } else {
    throw std::invalid_argument("unknown problem '" + std::string(name) + "'");
  }
  p.normalization = frozen_normalization(name);
  return p;
}

Normalization estimate_normalization(const Problem& problem, int n, std::uint64_t seed) {
  const auto k = static_cast<std::size_t>(problem.objective_count);
  Vector lo(k, std::numeric_limits<double>::infinity()), hi(k, -std::numeric_limits<double>::infinity());
  Rng rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  Vector x(static_cast<std::size_t>(problem.input_dim));
  for (int i = 0; i < n; ++i) {
    for (auto& v : x) v = u01(rng);
    const double s = u01(rng);
    const Vector y = problem.evaluate(x, s);
    for (std::size_t j = 0; j < k; ++j) {
      lo[j] = std::min(lo[j], y[j]);
      hi[j] = std::max(hi[j], y[j]);
    }
  }
  Normalization out{lo, Vector(k)};
  for (std::size_t j = 0; j < k; ++j) out.scale[j] = hi[j] > lo[j] ? hi[j] - lo[j] : 1.0;
  return out;
}

OracleFront oracle_front(const Problem& problem, int n, std::uint64_t seed) {
  if (n < 1000) throw std::invalid_argument("oracle front needs at least 1000 sample points");
  OracleFront out;
  out.sample_inputs.reserve(static_cast<std::size_t>(n));
  std::vector<Vector> values;
  values.reserve(static_cast<std::size_t>(n));
  Rng rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int i = 0; i < n; ++i) {
    Vector x(static_cast<std::size_t>(problem.input_dim));
    for (auto& v : x) v = u01(rng);
    values.push_back(problem.evaluate_normalized(x, 1.0));
    out.sample_inputs.push_back(std::move(x));
  }
  const auto front = pareto::ParetoFront::clipped(values, Vector(static_cast<std::size_t>(problem.objective_count), 0.0));
  out.front = front.points();
  out.hypervolume = pareto::hypervolume(front);
  return out;
}

}  // namespace momf::problems
