#include "sard/closed_form.hpp"

#include <cmath>
#include <cstdlib>
#include <string>
#include <utility>

#include "sard/double_double.hpp"
#include "sard/errors.hpp"

namespace sard {

namespace {

// q = sqrt(3) - 2 and sqrt(3) as hi/lo pairs. The moment identities of the
// assembled rule hinge on q being a root of q^2 + 4q + 1 = 0; at double
// precision that root property is broken at ~1e-16 and the 6/h^3 scaling
// turns it into a visible moment drift at large N, so the assembly carries q
// to ~1e-32.
constexpr DoubleDouble dd_q{-0.2679491924311227, -1.0671460244446628e-17};
constexpr DoubleDouble dd_sqrt3{1.7320508075688772, 1.0035084221806903e-16};

struct FormulaConstants {
  DoubleDouble q_n;                   // q^N
  DoubleDouble w_sum;                 // 6(q+2), weight of the geometric sums
  DoubleDouble w_near;                // 12q+5
  DoubleDouble w_self;                // 6q+4
  DoubleDouble w_corner;              // 3q+2
  DoubleDouble w_edge;                // 3(q+1), multiplies the f(0)/f(1) edge data
  DoubleDouble two_q1;                // 2q+1
  DoubleDouble q1;                    // q+1
  DoubleDouble q2;                    // q+2
  DoubleDouble three_q1;              // 3q+1
  std::vector<DoubleDouble> q_pow;    // q^0 .. q^N

  explicit FormulaConstants(int n)
      : w_sum((dd_q + 2.0) * 6.0),
        w_near(dd_q * 12.0 + 5.0),
        w_self(dd_q * 6.0 + 4.0),
        w_corner(dd_q * 3.0 + 2.0),
        w_edge((dd_q + 1.0) * 3.0),
        two_q1(dd_q * 2.0 + 1.0),
        q1(dd_q + 1.0),
        q2(dd_q + 2.0),
        three_q1(dd_q * 3.0 + 1.0) {
    q_pow.reserve(static_cast<std::size_t>(n) + 1);
    q_pow.emplace_back(1.0);
    for (int k = 1; k <= n; ++k) q_pow.push_back(q_pow.back() * dd_q);
    q_n = q_pow.back();
  }
};

struct TailParameters {
  DoubleDouble a1m, a0m, a1p, a0p;
  DoubleDouble delta, delta1, delta2;
  DoubleDouble big_a1, big_a2, big_a3;
  DoubleDouble big_b1, big_b2, big_b3;
  DoubleDouble f1, f2;
};

TailParameters compute_tail_parameters(const GridSpec& grid, const RhsData& rhs,
                                       const FormulaConstants& fc) {
  const int n = grid.n;
  const double h = grid.h;
  const std::vector<double>& f = rhs.f;
  const std::size_t un = static_cast<std::size_t>(n);

  TailParameters tp;
  tp.big_a1 = fc.w_corner;
  tp.big_a2 = fc.two_q1 * h;
  tp.big_a3 = dd_q * (h * h);
  tp.big_b1 = fc.q_n * fc.three_q1 * 3.0;
  tp.big_b2 = fc.q_n * fc.two_q1 * h;
  tp.big_b3 = -(fc.q_n * dd_q * (h * h));

  // F1 = 6(q+2) sum_{g=1..N} q^{g+1} f_g - (12q+5) f_0 via a Horner sweep
  DoubleDouble horner{0.0};
  for (int g = n; g >= 1; --g) horner = (horner + f[static_cast<std::size_t>(g)]) * dd_q;
  tp.f1 = horner * dd_q * fc.w_sum - fc.w_near * f[0];
  // F2 = 6(q+2) sum_{g=0..N-1} q^{N+1-g} f_g - (12q+5) f_N
  horner = DoubleDouble{0.0};
  for (int g = 0; g < n; ++g) horner = (horner + f[static_cast<std::size_t>(g)]) * dd_q;
  tp.f2 = horner * dd_q * fc.w_sum - fc.w_near * f[un];

  const DoubleDouble g0_12 = DoubleDouble(rhs.g0) / 12.0;
  const DoubleDouble g1_4 = DoubleDouble(rhs.g1) / 4.0;
  // f(1,t) - g0/12 + g1/4, the right-seam combination
  const DoubleDouble seam = DoubleDouble(f[un]) - g0_12 + g1_4;

  const DoubleDouble e1 = -tp.f1 - (tp.big_b1 + tp.big_b2 * 3.0 + tp.big_b3 * 3.0) * g0_12 +
                          (tp.big_b1 + tp.big_b2 * 2.0 + tp.big_b3 - tp.big_a3) * g1_4 -
                          tp.big_a1 * f[0] - tp.big_b1 * seam;
  const DoubleDouble e2 = -tp.f2 - (tp.big_a1 + tp.big_a2 * 3.0 + tp.big_a3 * 3.0) * g0_12 +
                          (tp.big_a1 + tp.big_a2 * 2.0 + tp.big_a3 - tp.big_b3) * g1_4 -
                          tp.big_b1 * f[0] - tp.big_a1 * seam;

  tp.delta = tp.big_b2 * tp.big_b2 - tp.big_a2 * tp.big_a2;
  if (tp.delta.value() == 0.0) {
    throw SingularSystemError("degenerate tail system: zero determinant");
  }
  tp.delta1 = tp.big_a2 * e1 - tp.big_b2 * e2;
  tp.delta2 = tp.big_b2 * e1 - tp.big_a2 * e2;
  tp.a1m = tp.delta1 / tp.delta;
  tp.a1p = tp.delta2 / tp.delta;
  tp.a0m = DoubleDouble(f[0]);
  tp.a0p = seam - tp.a1p;
  return tp;
}

void check_rhs_shape(const GridSpec& grid, const RhsData& rhs) {
  if (rhs.f.size() != grid.nodes.size()) {
    throw InvalidInputError("rhs vector has " + std::to_string(rhs.f.size()) +
                            " entries for a grid with " + std::to_string(grid.nodes.size()) +
                            " nodes");
  }
}

Multipliers multipliers_from(const TailParameters& tp) {
  BoundaryUnknowns bu;
  bu.a1m = tp.a1m.value();
  bu.a0m = tp.a0m.value();
  bu.a1p = tp.a1p.value();
  bu.a0p = tp.a0p.value();
  return recover_multipliers(bu);
}

// u(h*beta) with the compensated tail parameters; used by the convolution route.
DoubleDouble u_extension_dd(const GridSpec& grid, const RhsData& rhs,
                            const TailParameters& tp, long beta) {
  if (beta >= 0 && beta <= grid.n) {
    return DoubleDouble(rhs.f[static_cast<std::size_t>(beta)]);
  }
  const double x = grid.h * static_cast<double>(beta);
  const DoubleDouble x2 = detail::two_prod(x, x);
  const DoubleDouble x3 = x2 * x;
  const DoubleDouble g0_12 = DoubleDouble(rhs.g0) / 12.0;
  const DoubleDouble g1_4 = DoubleDouble(rhs.g1) / 4.0;
  if (beta < 0) {
    return -(x3 * g0_12) + x2 * g1_4 + tp.a1m * x + tp.a0m;
  }
  return x3 * g0_12 - x2 * g1_4 + tp.a1p * x + tp.a0p;
}

QuadratureRule assemble_rule(const GridSpec& grid, Singularity t, bool naive_sums) {
  const RhsData rhs = rhs_vector(grid, t);
  const int n = grid.n;
  const double h = grid.h;
  const std::vector<double>& f = rhs.f;
  const std::size_t un = static_cast<std::size_t>(n);
  const FormulaConstants fc(n);
  const TailParameters tp = compute_tail_parameters(grid, rhs, fc);

  // prefix[b] = sum_{g=0}^{b-2} q^{b-g} f_g,  suffix[b] = sum_{g=b+2}^{N} q^{g-b} f_g
  std::vector<DoubleDouble> prefix(un + 1), suffix(un + 1);
  if (naive_sums) {
    for (int b = 0; b <= n; ++b) {
      DoubleDouble acc{0.0};
      for (int g = 0; g <= b - 2; ++g) {
        acc += fc.q_pow[static_cast<std::size_t>(b - g)] * f[static_cast<std::size_t>(g)];
      }
      prefix[static_cast<std::size_t>(b)] = acc;
      acc = DoubleDouble{0.0};
      for (int g = b + 2; g <= n; ++g) {
        acc += fc.q_pow[static_cast<std::size_t>(g - b)] * f[static_cast<std::size_t>(g)];
      }
      suffix[static_cast<std::size_t>(b)] = acc;
    }
  } else {
    for (int b = 2; b <= n; ++b) {
      prefix[static_cast<std::size_t>(b)] =
          (prefix[static_cast<std::size_t>(b - 1)] + dd_q * f[static_cast<std::size_t>(b - 2)]) *
          dd_q;
    }
    for (int b = n - 2; b >= 0; --b) {
      suffix[static_cast<std::size_t>(b)] =
          (suffix[static_cast<std::size_t>(b + 1)] + dd_q * f[static_cast<std::size_t>(b + 2)]) *
          dd_q;
    }
  }

  const DoubleDouble g0_12 = DoubleDouble(rhs.g0) / 12.0;
  const DoubleDouble g0_4 = DoubleDouble(rhs.g0) / 4.0;
  const DoubleDouble g1_4 = DoubleDouble(rhs.g1) / 4.0;
  const double h2 = h * h;
  const double h3 = h2 * h;
  const double scale = 6.0 / h3;

  QuadratureRule rule;
  rule.grid = grid;
  rule.t = t.value();
  rule.coefficients.resize(un + 1);

  {
    DoubleDouble acc = g0_12 * (DoubleDouble(h3) - fc.q_n * ((fc.q2 * h + h2) * 3.0));
    acc += g1_4 * fc.q_n * (fc.q2 * (2.0 * h) + h2);
    acc += tp.a1m * (fc.q1 * h);
    acc += fc.w_corner * f[0];
    acc -= fc.w_near * f[1];
    acc -= fc.q_n * (fc.w_edge * f[un] + tp.a1p * (fc.q2 * h));
    acc += suffix[0] * fc.w_sum;
    rule.coefficients[0] = (acc * scale).value();
  }

  for (int b = 1; b < n; ++b) {
    const std::size_t ub = static_cast<std::size_t>(b);
    const DoubleDouble& qb = fc.q_pow[ub];
    const DoubleDouble& qnb = fc.q_pow[un - ub];
    DoubleDouble acc = prefix[ub] * fc.w_sum;
    acc -= fc.w_near * f[ub - 1];
    acc -= fc.w_near * f[ub + 1];
    acc += fc.w_self * f[ub];
    acc += suffix[ub] * fc.w_sum;
    acc += g1_4 * (qnb * (fc.q2 * (2.0 * h) + h2) - qb * h2);
    acc += qb * (tp.a1m * (fc.q2 * h) - fc.w_edge * f[0]);
    acc -= qnb * (fc.w_edge * f[un] + g0_4 * (fc.q2 * h + h2) + tp.a1p * (fc.q2 * h));
    rule.coefficients[ub] = (acc * scale).value();
  }

  {
    DoubleDouble acc = -(g0_12 * (fc.q1 * (3.0 * h) - h3));
    acc += g1_4 * (fc.q1 * (2.0 * h) - fc.q_n * h2);
    acc += fc.q_n * (tp.a1m * (fc.q2 * h) - fc.w_edge * f[0]);
    acc -= tp.a1p * (fc.q1 * h);
    acc += fc.w_corner * f[un];
    acc -= fc.w_near * f[un - 1];
    acc += prefix[un] * fc.w_sum;
    rule.coefficients[un] = (acc * scale).value();
  }

  rule.multipliers = multipliers_from(tp);
  rule.provenance = naive_sums ? Provenance::closed_form_naive : Provenance::closed_form;
  return rule;
}

}  // namespace

std::string_view to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::closed_form: return "closed-form";
    case Provenance::closed_form_naive: return "closed-form-naive";
    case Provenance::convolution: return "convolution";
    case Provenance::oracle: return "oracle";
  }
  return "unknown";
}

BoundaryUnknowns boundary_constants(const GridSpec& grid, Singularity t, const RhsData& rhs) {
  check_rhs_shape(grid, rhs);
  require_no_collision(grid, t);
  const FormulaConstants fc(grid.n);
  const TailParameters tp = compute_tail_parameters(grid, rhs, fc);
  BoundaryUnknowns bu;
  bu.a1 = tp.big_a1.value();
  bu.a2 = tp.big_a2.value();
  bu.a3 = tp.big_a3.value();
  bu.b1 = tp.big_b1.value();
  bu.b2 = tp.big_b2.value();
  bu.b3 = tp.big_b3.value();
  bu.f1 = tp.f1.value();
  bu.f2 = tp.f2.value();
  bu.delta = tp.delta.value();
  bu.delta1 = tp.delta1.value();
  bu.delta2 = tp.delta2.value();
  bu.a1m = tp.a1m.value();
  bu.a0m = tp.a0m.value();
  bu.a1p = tp.a1p.value();
  bu.a0p = tp.a0p.value();
  return bu;
}

Multipliers recover_multipliers(const BoundaryUnknowns& bu) {
  Multipliers m;
  m.p1 = 0.5 * (bu.a1m + bu.a1p);
  m.p0 = 0.5 * (bu.a0m + bu.a0p);
  m.p1_0 = 0.5 * (bu.a1p - bu.a1m);
  m.p0_0 = 0.5 * (bu.a0p - bu.a0m);
  return m;
}

double u_extension(const GridSpec& grid, [[maybe_unused]] Singularity t, const RhsData& rhs,
                   const BoundaryUnknowns& bu, long beta) {
  check_rhs_shape(grid, rhs);
  if (beta >= 0 && beta <= grid.n) {
    return rhs.f[static_cast<std::size_t>(beta)];
  }
  const double x = grid.h * static_cast<double>(beta);
  const double g0_12 = rhs.g0 / 12.0;
  const double g1_4 = rhs.g1 / 4.0;
  if (beta < 0) {
    return -x * x * x * g0_12 + x * x * g1_4 + bu.a1m * x + bu.a0m;
  }
  return x * x * x * g0_12 - x * x * g1_4 + bu.a1p * x + bu.a0p;
}

QuadratureRule coefficients(const GridSpec& grid, Singularity t) {
  return assemble_rule(grid, t, /*naive_sums=*/false);
}

QuadratureRule coefficients_naive(const GridSpec& grid, Singularity t) {
  return assemble_rule(grid, t, /*naive_sums=*/true);
}

QuadratureRule coefficients_via_convolution(const GridSpec& grid, Singularity t, int window) {
  if (window < 40) {
    throw InvalidInputError("convolution route needs window >= 40, got " +
                            std::to_string(window));
  }
  const RhsData rhs = rhs_vector(grid, t);
  const FormulaConstants fc(grid.n);
  const TailParameters tp = compute_tail_parameters(grid, rhs, fc);

  const DoubleDouble w0 = dd_sqrt3 * 6.0 - 8.0;
  const DoubleDouble w1 = 19.0 - dd_sqrt3 * 12.0;
  std::vector<DoubleDouble> wk(static_cast<std::size_t>(window) + 1);
  wk[0] = w0;
  if (window >= 1) wk[1] = w1;
  DoubleDouble qk = dd_q;
  for (int k = 2; k <= window; ++k) {
    qk = qk * dd_q;
    wk[static_cast<std::size_t>(k)] = dd_sqrt3 * 6.0 * qk;
  }

  const double h = grid.h;
  const double scale = 6.0 / (h * h * h);
  QuadratureRule rule;
  rule.grid = grid;
  rule.t = t.value();
  rule.coefficients.resize(grid.nodes.size());
  for (int b = 0; b <= grid.n; ++b) {
    DoubleDouble acc{0.0};
    for (long gamma = b - window; gamma <= b + window; ++gamma) {
      const auto k = static_cast<std::size_t>(std::labs(b - gamma));
      acc += wk[k] * u_extension_dd(grid, rhs, tp, gamma);
    }
    rule.coefficients[static_cast<std::size_t>(b)] = (acc * scale).value();
  }
  rule.multipliers = multipliers_from(tp);
  rule.provenance = Provenance::convolution;
  return rule;
}

}  // namespace sard
