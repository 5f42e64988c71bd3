#include "sard/oracle.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <string>

#include "sard/double_double.hpp"
#include "sard/errors.hpp"

namespace sard {

namespace {

constexpr double pivot_floor = 1e-13;
constexpr long panel_budget = 1L << 16;
constexpr int depth_cap = 48;

struct LuFactors {
  int dim = 0;
  std::vector<double> lu;   // row-major, L below diagonal (unit), U on/above
  std::vector<int> perm;    // row permutation
};

LuFactors factorize(std::span<const double> matrix, int dim) {
  LuFactors fac;
  fac.dim = dim;
  fac.lu.assign(matrix.begin(), matrix.end());
  fac.perm.resize(static_cast<std::size_t>(dim));
  std::vector<double> scale(static_cast<std::size_t>(dim), 0.0);
  auto at = [&](int i, int j) -> double& {
    return fac.lu[static_cast<std::size_t>(i) * static_cast<std::size_t>(dim) +
                  static_cast<std::size_t>(j)];
  };
  for (int i = 0; i < dim; ++i) {
    fac.perm[static_cast<std::size_t>(i)] = i;
    double s = 0.0;
    for (int j = 0; j < dim; ++j) s = std::max(s, std::abs(at(i, j)));
    if (s == 0.0) throw SingularSystemError("zero row in dense system");
    scale[static_cast<std::size_t>(i)] = s;
  }
  for (int k = 0; k < dim; ++k) {
    // implicit row scaling: pick the row maximizing |a_ik| / scale_i
    int pivot_row = k;
    double best = std::abs(at(k, k)) / scale[static_cast<std::size_t>(k)];
    for (int i = k + 1; i < dim; ++i) {
      const double cand = std::abs(at(i, k)) / scale[static_cast<std::size_t>(i)];
      if (cand > best) {
        best = cand;
        pivot_row = i;
      }
    }
    if (best <= pivot_floor) {
      throw SingularSystemError("scaled pivot " + std::to_string(best) +
                                " below threshold at column " + std::to_string(k));
    }
    if (pivot_row != k) {
      for (int j = 0; j < dim; ++j) std::swap(at(k, j), at(pivot_row, j));
      std::swap(scale[static_cast<std::size_t>(k)], scale[static_cast<std::size_t>(pivot_row)]);
      std::swap(fac.perm[static_cast<std::size_t>(k)],
                fac.perm[static_cast<std::size_t>(pivot_row)]);
    }
    const double pivot = at(k, k);
    for (int i = k + 1; i < dim; ++i) {
      const double m = at(i, k) / pivot;
      at(i, k) = m;
      if (m != 0.0) {
        for (int j = k + 1; j < dim; ++j) at(i, j) -= m * at(k, j);
      }
    }
  }
  return fac;
}

std::vector<double> lu_apply(const LuFactors& fac, std::span<const double> rhs) {
  const int dim = fac.dim;
  auto at = [&](int i, int j) {
    return fac.lu[static_cast<std::size_t>(i) * static_cast<std::size_t>(dim) +
                  static_cast<std::size_t>(j)];
  };
  std::vector<double> x(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    double v = rhs[static_cast<std::size_t>(fac.perm[static_cast<std::size_t>(i)])];
    for (int j = 0; j < i; ++j) v -= at(i, j) * x[static_cast<std::size_t>(j)];
    x[static_cast<std::size_t>(i)] = v;
  }
  for (int i = dim - 1; i >= 0; --i) {
    double v = x[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < dim; ++j) v -= at(i, j) * x[static_cast<std::size_t>(j)];
    x[static_cast<std::size_t>(i)] = v / at(i, i);
  }
  return x;
}

// residual rhs - matrix*x with compensated dot products
std::vector<double> compensated_residual(std::span<const double> matrix,
                                         std::span<const double> rhs,
                                         std::span<const double> x, int dim) {
  std::vector<double> r(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    DoubleDouble acc{rhs[static_cast<std::size_t>(i)]};
    const std::size_t row = static_cast<std::size_t>(i) * static_cast<std::size_t>(dim);
    for (int j = 0; j < dim; ++j) {
      acc -= detail::two_prod(matrix[row + static_cast<std::size_t>(j)],
                              x[static_cast<std::size_t>(j)]);
    }
    r[static_cast<std::size_t>(i)] = acc.value();
  }
  return r;
}

}  // namespace

LinearSolution solve_linear_system(std::span<const double> matrix, std::span<const double> rhs) {
  const int dim = static_cast<int>(rhs.size());
  if (matrix.size() != rhs.size() * rhs.size() || dim == 0) {
    throw InvalidInputError("linear system shape mismatch");
  }
  const LuFactors fac = factorize(matrix, dim);
  std::vector<double> x = lu_apply(fac, rhs);
  // iterative refinement with compensated residuals; stop once the
  // correction stagnates relative to the solution
  double previous_correction = std::numeric_limits<double>::infinity();
  for (int sweep = 0; sweep < 10; ++sweep) {
    const std::vector<double> r = compensated_residual(matrix, rhs, x, dim);
    const std::vector<double> dx = lu_apply(fac, r);
    double correction = 0.0;
    double solution = 0.0;
    for (int i = 0; i < dim; ++i) {
      x[static_cast<std::size_t>(i)] += dx[static_cast<std::size_t>(i)];
      correction = std::max(correction, std::abs(dx[static_cast<std::size_t>(i)]));
      solution = std::max(solution, std::abs(x[static_cast<std::size_t>(i)]));
    }
    if (correction <= 1e-16 * solution || correction >= 0.5 * previous_correction) break;
    previous_correction = correction;
  }
  LinearSolution sol;
  double res = 0.0;
  const std::vector<double> r = compensated_residual(matrix, rhs, x, dim);
  for (double v : r) res = std::max(res, std::abs(v));
  sol.x = std::move(x);
  sol.residual = res;
  return sol;
}

DenseSystem assemble_system(const GridSpec& grid, Singularity t, double collision_tol) {
  require_no_collision(grid, t, collision_tol);
  const int n = grid.n;
  const int dim = n + 3;
  DenseSystem sys;
  sys.n = n;
  sys.matrix.assign(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim), 0.0);
  sys.rhs.assign(static_cast<std::size_t>(dim), 0.0);
  auto at = [&](int i, int j) -> double& {
    return sys.matrix[static_cast<std::size_t>(i) * static_cast<std::size_t>(dim) +
                      static_cast<std::size_t>(j)];
  };
  for (int b = 0; b <= n; ++b) {
    const double xb = grid.nodes[static_cast<std::size_t>(b)];
    for (int g = 0; g <= n; ++g) {
      const double d = std::abs(xb - grid.nodes[static_cast<std::size_t>(g)]);
      at(b, g) = d * d * d / 12.0;
    }
    at(b, n + 1) = xb;
    at(b, n + 2) = 1.0;
    sys.rhs[static_cast<std::size_t>(b)] = f_value(grid, b, t, collision_tol);
  }
  for (int g = 0; g <= n; ++g) {
    at(n + 1, g) = 1.0;
    at(n + 2, g) = grid.nodes[static_cast<std::size_t>(g)];
  }
  sys.rhs[static_cast<std::size_t>(n + 1)] = g0(t);
  sys.rhs[static_cast<std::size_t>(n + 2)] = g1(t);
  return sys;
}

OracleSolution solve_dense(const DenseSystem& system) {
  LinearSolution lin = solve_linear_system(system.matrix, system.rhs);
  OracleSolution sol;
  sol.coefficients.assign(lin.x.begin(), lin.x.begin() + system.n + 1);
  sol.p1 = lin.x[static_cast<std::size_t>(system.n) + 1];
  sol.p0 = lin.x[static_cast<std::size_t>(system.n) + 2];
  sol.residual = lin.residual;
  return sol;
}

QuadratureRule oracle_rule(const GridSpec& grid, Singularity t) {
  const OracleSolution sol = solve_dense(assemble_system(grid, t));
  QuadratureRule rule;
  rule.grid = grid;
  rule.t = t.value();
  rule.coefficients = sol.coefficients;
  rule.multipliers.p1 = sol.p1;
  rule.multipliers.p0 = sol.p0;
  // the half-difference parts fall out of the cubic expansion of the kernel
  // sum outside [0,1]: p1_0 = (h^2/4) sum C g^2, p0_0 = -(h^3/12) sum C g^3
  double sum_g2 = 0.0;
  double sum_g3 = 0.0;
  for (int g = 0; g <= grid.n; ++g) {
    const double gg = static_cast<double>(g);
    sum_g2 += sol.coefficients[static_cast<std::size_t>(g)] * gg * gg;
    sum_g3 += sol.coefficients[static_cast<std::size_t>(g)] * gg * gg * gg;
  }
  const double h2 = grid.h * grid.h;
  rule.multipliers.p1_0 = h2 / 4.0 * sum_g2;
  rule.multipliers.p0_0 = -(h2 * grid.h) / 12.0 * sum_g3;
  rule.provenance = Provenance::oracle;
  return rule;
}

namespace {

struct PvIntegrand {
  const std::function<double(double)>& phi;
  double t;
  double phi_t;
  double dphi_t;  // symmetric-difference slope at the removable point
  double guard;

  double operator()(double x) const {
    if (std::abs(x - t) <= guard) return dphi_t;
    return (phi(x) - phi_t) / (x - t);
  }
};

struct AdaptiveState {
  const PvIntegrand& reg;
  long panels = 0;
};

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(AdaptiveState& state, double a, double fa, double m, double fm, double b,
             double fb, double whole, double tol, int depth) {
  if (++state.panels > panel_budget) {
    throw AccuracyError("pv integration exhausted its subdivision budget");
  }
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = state.reg(lm);
  const double frm = state.reg(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth > 0 && std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  if (depth >= depth_cap) {
    throw AccuracyError("pv integration tolerance unreachable at depth cap");
  }
  return adapt(state, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1) +
         adapt(state, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1);
}

double integrate_adaptive(const PvIntegrand& reg, double a, double b, double tol) {
  AdaptiveState state{reg};
  const double fa = reg(a);
  const double fb = reg(b);
  const double m = 0.5 * (a + b);
  const double fm = reg(m);
  const double whole = simpson(a, fa, b, fb, fm);
  return adapt(state, a, fa, m, fm, b, fb, whole, tol, 0);
}

}  // namespace

double pv_integral(const std::function<double(double)>& phi, Singularity t, double tol) {
  if (!(tol > 0.0)) {
    throw InvalidInputError("pv tolerance must be positive");
  }
  const double tv = t.value();
  const double phi_t = phi(tv);
  const double d = std::min({1e-6, tv / 2.0, (1.0 - tv) / 2.0});
  const double dphi_t = (phi(tv + d) - phi(tv - d)) / (2.0 * d);
  const PvIntegrand reg{phi, tv, phi_t, dphi_t, 1e-9 * std::max(1.0, std::abs(tv))};
  // split at the removable point: the integrand is smooth on each side
  const double value = integrate_adaptive(reg, 0.0, tv, 0.5 * tol) +
                       integrate_adaptive(reg, tv, 1.0, 0.5 * tol);
  return value + phi_t * (std::log(1.0 - tv) - std::log(tv));
}

double f_oracle(const GridSpec& grid, int beta, Singularity t, double tol) {
  if (beta < 0 || beta > grid.n) {
    throw InvalidInputError("node index " + std::to_string(beta) + " outside 0.." +
                            std::to_string(grid.n));
  }
  const double s = grid.nodes[static_cast<std::size_t>(beta)];
  return pv_integral(
      [s](double x) {
        const double d = std::abs(x - s);
        return d * d * d / 12.0;
      },
      t, tol);
}

}  // namespace sard
