#pragma once

#include <optional>
#include <vector>

namespace sard {

/// sqrt(3) - 2, the decay ratio of the discrete operator. Note: this is the
/// correctly rounded value; evaluating fl(sqrt(3)) - 2 lands one ulp away.
inline constexpr double kernel_q = -0.2679491924311227;

/// The grid operator D2 whose convolution with |h*beta|^3/12 yields the
/// discrete delta -- the discrete analogue of d^4/dx^4 on this kernel.
struct OperatorKernel {
  double h = 1.0;
  double q = kernel_q;
};

/// D2(h*beta) = (6/h^4) * w with
///   w = 6*sqrt(3)*q^|beta|   for |beta| >= 2,
///   w = 19 - 12*sqrt(3)      for |beta| = 1,
///   w = 6*sqrt(3) - 8        for beta = 0.
double d2_value(const OperatorKernel& kernel, long beta);

/// Cubic c3*x^3 + c2*x^2 + c1*x + c0, used as a tail extension rule.
struct CubicTail {
  double c3 = 0.0;
  double c2 = 0.0;
  double c1 = 0.0;
  double c0 = 0.0;
  double operator()(double x) const { return ((c3 * x + c2) * x + c1) * x + c0; }
};

/// A function of a discrete argument: values stored on a finite index window,
/// with a declared extension rule outside it (cubic tail in x = h*beta, or
/// zero when no tail is given).
class DiscreteFunction {
 public:
  DiscreteFunction(long first, std::vector<double> values, double step,
                   std::optional<CubicTail> left_tail = std::nullopt,
                   std::optional<CubicTail> right_tail = std::nullopt);

  double operator()(long beta) const;

  long first() const { return first_; }
  long last() const { return first_ + static_cast<long>(values_.size()) - 1; }
  double step() const { return step_; }

 private:
  long first_;
  std::vector<double> values_;
  double step_;
  std::optional<CubicTail> left_tail_;
  std::optional<CubicTail> right_tail_;
};

/// sum_{gamma = beta-window}^{beta+window} a(gamma) * b(beta - gamma).
/// window must be positive.
double convolve(const DiscreteFunction& a, const DiscreteFunction& b, long beta, int window);

/// Residual of D2 * (h*beta)^alpha = 0 for 0 <= alpha < 4: the h^4-normalized
/// truncated convolution, maximized over a small probe set of beta. Decays
/// like |q|^window until the binary64 rounding floor (~1e-12); <= 1e-10 at
/// window 80 by a wide margin.
double check_annihilation(const OperatorKernel& kernel, int alpha, int window);

/// h * sum_{|gamma| <= window} D2(h*gamma) * |h*(beta-gamma)|^3 / 12, which
/// reproduces the discrete delta at beta.
double check_delta_identity(const OperatorKernel& kernel, long beta, int window);

}  // namespace sard
