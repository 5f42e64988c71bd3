#pragma once

#include <string_view>
#include <vector>

#include "sard/grid.hpp"

namespace sard {

/// The boundary-unknown web behind the explicit coefficient formulas: the
/// constants A1..A3, B1..B3 of the two-sided tail system, the data sums
/// F1/F2, the determinants, and the resulting tail parameters a1-/a0-/a1+/a0+
/// of the extended right-hand side.
struct BoundaryUnknowns {
  double a1 = 0.0, a2 = 0.0, a3 = 0.0;  // A1 = 3q+2, A2 = h(2q+1), A3 = h^2 q
  double b1 = 0.0, b2 = 0.0, b3 = 0.0;  // B1 = 3q^N(3q+1), B2 = h q^N (2q+1), B3 = -h^2 q^{N+1}
  double f1 = 0.0, f2 = 0.0;
  double delta = 0.0, delta1 = 0.0, delta2 = 0.0;
  double a1m = 0.0, a0m = 0.0;  // left tail:  slope a1-, intercept a0- = f(0,t)
  double a1p = 0.0, a0p = 0.0;  // right tail: slope a1+, intercept a0+
};

/// The linear part p1*x + p0 of the rule's defining system, split into the
/// half-sum (p1, p0) and half-difference (p1_0, p0_0) of the two tail lines.
struct Multipliers {
  double p1 = 0.0;
  double p0 = 0.0;
  double p1_0 = 0.0;
  double p0_0 = 0.0;
};

enum class Provenance {
  closed_form,
  closed_form_naive,
  convolution,
  oracle,
};

std::string_view to_string(Provenance provenance);

/// An assembled rule: pv-int_0^1 phi(x)/(x-t) dx ~= sum_beta C[beta] phi(h*beta).
struct QuadratureRule {
  GridSpec grid;
  double t = 0.0;
  std::vector<double> coefficients;
  Multipliers multipliers;
  Provenance provenance = Provenance::closed_form;
};

/// Tail parameters for (grid, t, rhs). Throws SingularSystemError if the
/// 2x2 determinant degenerates (cannot happen for n >= 1, checked anyway).
BoundaryUnknowns boundary_constants(const GridSpec& grid, Singularity t, const RhsData& rhs);

Multipliers recover_multipliers(const BoundaryUnknowns& bu);

/// The extension u(h*beta) of the rhs to all integers: f on 0..N, cubic tails
/// outside, continuous at both seams by construction of a0-/a0+.
double u_extension(const GridSpec& grid, Singularity t, const RhsData& rhs,
                   const BoundaryUnknowns& bu, long beta);

/// Explicit optimal coefficients. The two geometric inner sums run as O(N)
/// prefix/suffix recurrences; the whole bracket is accumulated compensated
/// (see double_double.hpp) so the moment identities hold at 1e-9 even for
/// large N.
QuadratureRule coefficients(const GridSpec& grid, Singularity t);

/// Same formula with direct O(N^2) summation of the geometric sums; serves as
/// an in-repo oracle for the recurrence bookkeeping.
QuadratureRule coefficients_naive(const GridSpec& grid, Singularity t);

/// Independent route: C[beta] = h * (D2 * u)(h*beta), truncated at `window`
/// (>= 40). Agrees with the explicit formula to the rounding floor.
QuadratureRule coefficients_via_convolution(const GridSpec& grid, Singularity t, int window);

}  // namespace sard
