#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sard/closed_form.hpp"
#include "sard/grid.hpp"

namespace sard {

/// A test integrand with, where available, the exact pv value as a function
/// of t. Entries without `analytic_pv` are served by the adaptive pv
/// integrator at tolerance 1e-11.
struct CatalogFunction {
  std::string id;
  std::function<double(double)> evaluate;
  std::function<double(double)> analytic_pv;  // empty for numeric-only entries

  bool has_analytic() const { return static_cast<bool>(analytic_pv); }
};

/// Built-in integrands: 1, x, x^2, x^3, x^4, 1/(1+x), exp(x).
const std::vector<CatalogFunction>& catalog();

/// nullptr when no entry carries the id.
const CatalogFunction* find_catalog(std::string_view id);

/// sum_beta C[beta] * phi(h*beta).
double apply_rule(const QuadratureRule& rule, const CatalogFunction& func);

/// Same with caller-supplied samples; must have exactly N+1 entries.
double apply_rule(const QuadratureRule& rule, std::span<const double> samples);

/// Exact pv value; throws ReferenceUnavailableError for numeric-only entries.
double analytic_reference(const CatalogFunction& func, Singularity t);

/// Analytic value when available, else pv_integral at the given tolerance.
double reference_value(const CatalogFunction& func, Singularity t, double tol = 1e-11);

struct ConvergenceRow {
  int n = 0;
  double approx = 0.0;
  double reference = 0.0;
  double abs_error = 0.0;
  bool skipped = false;
  std::string note;
};

struct ConvergenceReport {
  std::string function_id;
  double t = 0.0;
  std::vector<ConvergenceRow> rows;
  /// orders[i] spans rows[i] -> rows[i+1]; absent when either row is skipped
  /// or an error is not a positive finite number.
  std::vector<std::optional<double>> orders;
};

/// Builds a closed-form rule per n, applies it to func, and compares against
/// the analytic or numeric reference. Rows where t collides with a node are
/// kept but marked skipped and excluded from the order estimates.
ConvergenceReport convergence_study(const CatalogFunction& func, Singularity t,
                                    std::span<const int> n_list);

/// Pairwise log2(e_i / e_{i+1}) for errors under doubling; entries involving
/// non-positive errors come back empty.
std::vector<std::optional<double>> estimate_order(std::span<const double> errors);

}  // namespace sard
