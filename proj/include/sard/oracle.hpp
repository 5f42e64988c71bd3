#pragma once

#include <functional>
#include <span>
#include <vector>

#include "sard/closed_form.hpp"
#include "sard/grid.hpp"

namespace sard {

/// The defining linear system assembled densely. Unknown order is fixed:
/// C_0..C_N, then p1, then p0. Rows 0..N carry the |h*beta - h*gamma|^3/12
/// kernel plus the two polynomial columns; rows N+1 and N+2 are the moment
/// constraints.
struct DenseSystem {
  int n = 0;                   // grid size N; the system is (N+3) x (N+3)
  std::vector<double> matrix;  // row-major
  std::vector<double> rhs;

  int dim() const { return n + 3; }
};

struct OracleSolution {
  std::vector<double> coefficients;
  double p1 = 0.0;
  double p0 = 0.0;
  double residual = 0.0;  // max-norm of matrix*solution - rhs
};

/// Generic dense solve: Gaussian elimination with scaled partial pivoting and
/// two compensated-residual refinement sweeps.
struct LinearSolution {
  std::vector<double> x;
  double residual = 0.0;
};
LinearSolution solve_linear_system(std::span<const double> matrix, std::span<const double> rhs);

DenseSystem assemble_system(const GridSpec& grid, Singularity t,
                            double collision_tol = node_collision_tolerance);

/// Throws SingularSystemError when a scaled pivot drops below 1e-13.
OracleSolution solve_dense(const DenseSystem& system);

/// Assemble + solve, packaged as a rule with oracle provenance. The
/// half-difference multipliers are recovered from the coefficient moments
/// sum C*gamma^2 and sum C*gamma^3.
QuadratureRule oracle_rule(const GridSpec& grid, Singularity t);

/// pv-int_0^1 phi(x)/(x-t) dx by singularity subtraction: the regularized
/// integrand (phi(x)-phi(t))/(x-t) goes through adaptive Simpson bisection to
/// absolute tolerance tol, and the split-off pole integrates to g0(t) exactly.
/// Throws AccuracyError when the subdivision budget (2^16 panels) or depth
/// cap runs out before the tolerance is met.
double pv_integral(const std::function<double(double)>& phi, Singularity t, double tol = 1e-10);

/// pv form of the rhs entry f(h*beta, t); the independent check of f_value.
double f_oracle(const GridSpec& grid, int beta, Singularity t, double tol = 1e-10);

}  // namespace sard
