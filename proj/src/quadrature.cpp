#include "sard/quadrature.hpp"

#include <cmath>
#include <string>

#include "sard/errors.hpp"
#include "sard/oracle.hpp"

namespace sard {

namespace {

// pv-int_0^1 x^k/(x-t) dx = sum_{j=0}^{k-1} t^j/(k-j) + t^k ln((1-t)/t),
// from dividing x^k by (x - t)
double monomial_pv(int k, double t) {
  double sum = 0.0;
  double tj = 1.0;
  for (int j = 0; j < k; ++j) {
    sum += tj / static_cast<double>(k - j);
    tj *= t;
  }
  return sum + tj * (std::log(1.0 - t) - std::log(t));
}

std::vector<CatalogFunction> build_catalog() {
  std::vector<CatalogFunction> entries;
  entries.push_back({"one", [](double) { return 1.0; },
                     [](double t) { return monomial_pv(0, t); }});
  entries.push_back({"x", [](double x) { return x; },
                     [](double t) { return monomial_pv(1, t); }});
  entries.push_back({"x2", [](double x) { return x * x; },
                     [](double t) { return monomial_pv(2, t); }});
  entries.push_back({"x3", [](double x) { return x * x * x; },
                     [](double t) { return monomial_pv(3, t); }});
  entries.push_back({"x4", [](double x) { return x * x * x * x; },
                     [](double t) { return monomial_pv(4, t); }});
  // partial fractions: 1/((1+x)(x-t)) = (1/(1+t)) [1/(x-t) - 1/(1+x)]
  entries.push_back({"inv1p", [](double x) { return 1.0 / (1.0 + x); },
                     [](double t) {
                       return (std::log(1.0 - t) - std::log(t) - std::log(2.0)) / (1.0 + t);
                     }});
  entries.push_back({"exp", [](double x) { return std::exp(x); }, nullptr});
  return entries;
}

}  // namespace

const std::vector<CatalogFunction>& catalog() {
  static const std::vector<CatalogFunction> entries = build_catalog();
  return entries;
}

const CatalogFunction* find_catalog(std::string_view id) {
  for (const CatalogFunction& entry : catalog()) {
    if (entry.id == id) return &entry;
  }
  return nullptr;
}

double apply_rule(const QuadratureRule& rule, const CatalogFunction& func) {
  double acc = 0.0;
  for (std::size_t b = 0; b < rule.coefficients.size(); ++b) {
    acc += rule.coefficients[b] * func.evaluate(rule.grid.nodes[b]);
  }
  return acc;
}

double apply_rule(const QuadratureRule& rule, std::span<const double> samples) {
  if (samples.size() != rule.coefficients.size()) {
    throw InvalidInputError("rule expects " + std::to_string(rule.coefficients.size()) +
                            " samples, got " + std::to_string(samples.size()));
  }
  double acc = 0.0;
  for (std::size_t b = 0; b < samples.size(); ++b) {
    acc += rule.coefficients[b] * samples[b];
  }
  return acc;
}

double analytic_reference(const CatalogFunction& func, Singularity t) {
  if (!func.has_analytic()) {
    throw ReferenceUnavailableError("catalog entry '" + func.id +
                                    "' has no analytic pv value");
  }
  return func.analytic_pv(t.value());
}

double reference_value(const CatalogFunction& func, Singularity t, double tol) {
  if (func.has_analytic()) return func.analytic_pv(t.value());
  return pv_integral(func.evaluate, t, tol);
}

ConvergenceReport convergence_study(const CatalogFunction& func, Singularity t,
                                    std::span<const int> n_list) {
  if (n_list.empty()) {
    throw InvalidInputError("convergence study needs at least one grid size");
  }
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 2) {
      throw InvalidInputError("grid sizes must be >= 2");
    }
    if (i > 0 && n_list[i] <= n_list[i - 1]) {
      throw InvalidInputError("grid sizes must be strictly increasing");
    }
  }

  ConvergenceReport report;
  report.function_id = func.id;
  report.t = t.value();
  for (int n : n_list) {
    ConvergenceRow row;
    row.n = n;
    try {
      const QuadratureRule rule = coefficients(make_grid(n), t);
      row.approx = apply_rule(rule, func);
      row.reference = reference_value(func, t);
      row.abs_error = std::abs(row.approx - row.reference);
    } catch (const NodeCollisionError& e) {
      row.skipped = true;
      row.note = std::string("skipped: node collision (") + e.what() + ")";
      row.approx = row.reference = row.abs_error = std::nan("");
    }
    report.rows.push_back(std::move(row));
  }

  for (std::size_t i = 0; i + 1 < report.rows.size(); ++i) {
    const ConvergenceRow& a = report.rows[i];
    const ConvergenceRow& b = report.rows[i + 1];
    if (a.skipped || b.skipped || !(a.abs_error > 0.0) || !(b.abs_error > 0.0) ||
        !std::isfinite(a.abs_error) || !std::isfinite(b.abs_error)) {
      report.orders.emplace_back(std::nullopt);
    } else {
      report.orders.emplace_back(std::log2(a.abs_error / b.abs_error));
    }
  }
  return report;
}

std::vector<std::optional<double>> estimate_order(std::span<const double> errors) {
  if (errors.size() < 2) {
    throw InvalidInputError("order estimation needs at least two errors");
  }
  std::vector<std::optional<double>> orders;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    const double a = errors[i];
    const double b = errors[i + 1];
    if (a > 0.0 && b > 0.0 && std::isfinite(a) && std::isfinite(b)) {
      orders.emplace_back(std::log2(a / b));
    } else {
      orders.emplace_back(std::nullopt);
    }
  }
  return orders;
}

}  // namespace sard
