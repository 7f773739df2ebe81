#pragma once

#include <cmath>
#include <numbers>

namespace momf::normal {

inline constexpr double kInvSqrt2Pi = 0.3989422804014327;

inline double pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

inline double cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// log Phi(z), accurate in the far lower tail where erfc underflows.
inline double log_cdf(double z) {
  if (z > -30.0) return std::log(cdf(z));
  const double z2 = z * z;
  return -0.5 * z2 - std::log(-z) - 0.5 * std::log(2.0 * std::numbers::pi) +
         std::log1p(-1.0 / z2 + 3.0 / (z2 * z2));
}

// phi(z) / Phi(z) (inverse Mills ratio).
inline double pdf_over_cdf(double z) {
  if (z > -30.0) return pdf(z) / cdf(z);
  const double z2 = z * z;
  return -z / (1.0 - 1.0 / z2 + 3.0 / (z2 * z2));
}

// E[max(Y - level, 0)] for Y ~ N(mean, sd^2).
inline double expected_excess(double mean, double sd, double level) {
  const double d = mean - level;
  if (sd <= 0.0) return d > 0.0 ? d : 0.0;
  const double z = d / sd;
  const double v = d * cdf(z) + sd * pdf(z);
  return v > 0.0 ? v : 0.0;
}

}  // namespace momf::normal
