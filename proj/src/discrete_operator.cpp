#include "sard/discrete_operator.hpp"

#include <cmath>
#include <cstdlib>
#include <string>
#include <utility>

#include "sard/errors.hpp"

namespace sard {

namespace {

// q^k by repeated multiplication so odd powers keep their sign exact
double q_power(double q, long k) {
  double p = 1.0;
  for (long i = 0; i < k; ++i) p *= q;
  return p;
}

constexpr int min_check_window = 10;

}  // namespace

double d2_value(const OperatorKernel& kernel, long beta) {
  const long k = std::labs(beta);
  const double sqrt3 = std::sqrt(3.0);
  double w = 0.0;
  if (k == 0) {
    w = 6.0 * sqrt3 - 8.0;
  } else if (k == 1) {
    w = 19.0 - 12.0 * sqrt3;
  } else {
    w = 6.0 * sqrt3 * q_power(kernel.q, k);
  }
  const double h2 = kernel.h * kernel.h;
  return 6.0 / (h2 * h2) * w;
}

DiscreteFunction::DiscreteFunction(long first, std::vector<double> values, double step,
                                   std::optional<CubicTail> left_tail,
                                   std::optional<CubicTail> right_tail)
    : first_(first),
      values_(std::move(values)),
      step_(step),
      left_tail_(left_tail),
      right_tail_(right_tail) {
  if (values_.empty()) {
    throw InvalidInputError("discrete function needs a non-empty value window");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw InvalidInputError("discrete function values must be finite");
    }
  }
}

double DiscreteFunction::operator()(long beta) const {
  if (beta < first_) {
    return left_tail_ ? (*left_tail_)(step_ * static_cast<double>(beta)) : 0.0;
  }
  if (beta > last()) {
    return right_tail_ ? (*right_tail_)(step_ * static_cast<double>(beta)) : 0.0;
  }
  return values_[static_cast<std::size_t>(beta - first_)];
}

double convolve(const DiscreteFunction& a, const DiscreteFunction& b, long beta, int window) {
  if (window <= 0) {
    throw InvalidInputError("convolution window must be positive, got " +
                            std::to_string(window));
  }
  double acc = 0.0;
  for (long gamma = beta - window; gamma <= beta + window; ++gamma) {
    acc += a(gamma) * b(beta - gamma);
  }
  return acc;
}

double check_annihilation(const OperatorKernel& kernel, int alpha, int window) {
  if (alpha < 0 || alpha > 3) {
    throw InvalidInputError("annihilation holds for powers 0..3, got " +
                            std::to_string(alpha));
  }
  if (window < min_check_window) {
    throw InvalidInputError("check window must be >= " + std::to_string(min_check_window));
  }
  const double h4 = kernel.h * kernel.h * kernel.h * kernel.h;
  constexpr long probes[] = {-2, -1, 0, 1, 2, 5};
  double worst = 0.0;
  for (long beta : probes) {
    double acc = 0.0;
    for (long gamma = -window; gamma <= window; ++gamma) {
      double x = kernel.h * static_cast<double>(beta - gamma);
      double mono = 1.0;
      for (int i = 0; i < alpha; ++i) mono *= x;
      acc += d2_value(kernel, gamma) * mono;
    }
    worst = std::max(worst, std::abs(acc) * h4);
  }
  return worst;
}

double check_delta_identity(const OperatorKernel& kernel, long beta, int window) {
  if (window < min_check_window) {
    throw InvalidInputError("check window must be >= " + std::to_string(min_check_window));
  }
  double acc = 0.0;
  for (long gamma = -window; gamma <= window; ++gamma) {
    const double x = kernel.h * static_cast<double>(beta - gamma);
    acc += d2_value(kernel, gamma) * std::abs(x * x * x) / 12.0;
  }
  return kernel.h * acc;
}

}  // namespace sard
