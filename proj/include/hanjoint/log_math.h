// hanjoint/log_math.h
//
// Log-space arithmetic used by the CTC dynamic programs and the joint
// decoder. -infinity represents probability zero throughout.

#ifndef HANJOINT_LOG_MATH_H_
#define HANJOINT_LOG_MATH_H_

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace hanjoint {

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) without overflow.
inline double LogAdd(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == kLogZero) return a;
  return a + std::log1p(std::exp(b - a));
}

inline double LogSumExp(std::span<const double> values) {
  double max = kLogZero;
  for (double v : values) max = std::max(max, v);
  if (max == kLogZero) return kLogZero;
  if (std::isinf(max)) return max;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - max);
  return max + std::log(sum);
}

// log(w_a * exp(a) + w_b * exp(b)) for non-negative weights. A zero weight
// drops its term entirely, so 0 * exp(-inf) never produces NaN.
inline double WeightedLogAdd(double weight_a, double a, double weight_b,
                             double b) {
  double lhs = weight_a > 0.0 ? std::log(weight_a) + a : kLogZero;
  double rhs = weight_b > 0.0 ? std::log(weight_b) + b : kLogZero;
  return LogAdd(lhs, rhs);
}

}  // namespace hanjoint

#endif  // HANJOINT_LOG_MATH_H_
