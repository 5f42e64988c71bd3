#pragma once

#include <cmath>

namespace sard {

// Unevaluated sum of two doubles (hi + lo, |lo| <= ulp(hi)/2) with the usual
// error-free transforms. The closed-form coefficient assembly divides a heavily
// cancelling bracket by h^3; carrying that bracket as a hi/lo pair keeps the
// result accurate to a few ulp where plain accumulation loses ~N^3 * eps.
// Pure binary64 arithmetic throughout, no extended-precision types.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  constexpr DoubleDouble() = default;
  constexpr DoubleDouble(double x) : hi(x) {}  // NOLINT(google-explicit-constructor)
  constexpr DoubleDouble(double h, double l) : hi(h), lo(l) {}

  double value() const { return hi + lo; }
};

namespace detail {

inline DoubleDouble two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

// requires |a| >= |b| or a == 0
inline DoubleDouble quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

inline DoubleDouble two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

}  // namespace detail

inline DoubleDouble operator+(DoubleDouble a, DoubleDouble b) {
  DoubleDouble s = detail::two_sum(a.hi, b.hi);
  s.lo += a.lo + b.lo;
  return detail::quick_two_sum(s.hi, s.lo);
}

inline DoubleDouble operator+(DoubleDouble a, double b) {
  DoubleDouble s = detail::two_sum(a.hi, b);
  s.lo += a.lo;
  return detail::quick_two_sum(s.hi, s.lo);
}

inline DoubleDouble operator+(double a, DoubleDouble b) { return b + a; }

inline DoubleDouble operator-(DoubleDouble a) { return {-a.hi, -a.lo}; }

inline DoubleDouble operator-(DoubleDouble a, DoubleDouble b) { return a + (-b); }
inline DoubleDouble operator-(DoubleDouble a, double b) { return a + (-b); }
inline DoubleDouble operator-(double a, DoubleDouble b) { return (-b) + a; }

inline DoubleDouble operator*(DoubleDouble a, DoubleDouble b) {
  DoubleDouble p = detail::two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return detail::quick_two_sum(p.hi, p.lo);
}

inline DoubleDouble operator*(DoubleDouble a, double b) {
  DoubleDouble p = detail::two_prod(a.hi, b);
  p.lo += a.lo * b;
  return detail::quick_two_sum(p.hi, p.lo);
}

inline DoubleDouble operator*(double a, DoubleDouble b) { return b * a; }

inline DoubleDouble operator/(DoubleDouble a, DoubleDouble b) {
  const double q1 = a.hi / b.hi;
  DoubleDouble r = a - b * q1;
  const double q2 = r.hi / b.hi;
  r = r - b * q2;
  const double q3 = r.hi / b.hi;
  DoubleDouble q = detail::quick_two_sum(q1, q2);
  return q + q3;
}

inline DoubleDouble operator/(DoubleDouble a, double b) { return a / DoubleDouble(b); }

inline DoubleDouble& operator+=(DoubleDouble& a, DoubleDouble b) { return a = a + b; }
inline DoubleDouble& operator+=(DoubleDouble& a, double b) { return a = a + b; }
inline DoubleDouble& operator-=(DoubleDouble& a, DoubleDouble b) { return a = a - b; }

}  // namespace sard
