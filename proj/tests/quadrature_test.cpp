#include <cmath>
#include <vector>

#include "doctest.h"
#include "sard/closed_form.hpp"
#include "sard/errors.hpp"
#include "sard/grid.hpp"
#include "sard/oracle.hpp"
#include "sard/quadrature.hpp"

namespace {

const double t_pi = 0.3183098861837907;
const double t_s2 = 0.7071067811865476;

}  // namespace

TEST_SUITE("quadrature") {

TEST_CASE("catalog carries the expected entries") {
  for (const char* id : {"one", "x", "x2", "x3", "x4", "inv1p", "exp"}) {
    const sard::CatalogFunction* func = sard::find_catalog(id);
    REQUIRE(func != nullptr);
    CHECK(func->id == id);
  }
  CHECK(sard::find_catalog("nope") == nullptr);
  CHECK_FALSE(sard::find_catalog("exp")->has_analytic());
  CHECK(sard::find_catalog("x4")->has_analytic());
}

TEST_CASE("analytic references: monomials, rational entry, frozen values") {
  const sard::Singularity t04(0.4);
  CHECK(sard::analytic_reference(*sard::find_catalog("one"), t04) ==
        doctest::Approx(sard::g0(t04)).epsilon(1e-15));
  CHECK(sard::analytic_reference(*sard::find_catalog("x"), t04) ==
        doctest::Approx(sard::g1(t04)).epsilon(1e-15));
  CHECK(sard::analytic_reference(*sard::find_catalog("x2"), t04) ==
        doctest::Approx(0.9648744172973063).epsilon(1e-15));
  // x^3 at t = 1/2: 1/3 + 1/4 + 1/4 + 0 = 5/6
  CHECK(sard::analytic_reference(*sard::find_catalog("x3"), sard::Singularity(0.5)) ==
        doctest::Approx(5.0 / 6.0).epsilon(1e-15));
  CHECK_THROWS_AS(sard::analytic_reference(*sard::find_catalog("exp"), t04),
                  sard::ReferenceUnavailableError);
}

TEST_CASE("every analytic entry agrees with the pv integrator") {
  for (const sard::CatalogFunction& func : sard::catalog()) {
    if (!func.has_analytic()) continue;
    for (double tv : {0.21, t_pi, 0.75}) {
      const sard::Singularity t(tv);
      const double analytic = sard::analytic_reference(func, t);
      const double numeric = sard::pv_integral(func.evaluate, t, 1e-11);
      CHECK(std::abs(analytic - numeric) <= 2e-11 * std::max(1.0, std::abs(analytic)));
    }
  }
}

TEST_CASE("reference_value falls back to the pv integrator") {
  const sard::Singularity t(0.3);
  CHECK(sard::reference_value(*sard::find_catalog("exp"), t) ==
        doctest::Approx(2.6600099609952372).epsilon(5e-11));
  CHECK(sard::reference_value(*sard::find_catalog("one"), t) == sard::g0(t));
}

TEST_CASE("apply_rule is exact on degree <= 1") {
  for (int n : {2, 8, 32}) {
    const sard::GridSpec grid = sard::make_grid(n);
    for (double tv : {t_pi, t_s2}) {
      const sard::Singularity t(tv);
      const sard::QuadratureRule rule = sard::coefficients(grid, t);
      const double e0 = std::abs(sard::apply_rule(rule, *sard::find_catalog("one")) -
                                 sard::g0(t));
      const double e1 =
          std::abs(sard::apply_rule(rule, *sard::find_catalog("x")) - sard::g1(t));
      CHECK(e0 <= 1e-9 * (1.0 + std::abs(sard::g0(t))));
      CHECK(e1 <= 1e-9 * (1.0 + std::abs(sard::g1(t))));
    }
  }
}

TEST_CASE("apply_rule on sample vectors, with shape checking") {
  const sard::GridSpec grid = sard::make_grid(4);
  const sard::Singularity t(t_pi);
  const sard::QuadratureRule rule = sard::coefficients(grid, t);

  std::vector<double> samples(grid.nodes.begin(), grid.nodes.end());  // phi = x
  CHECK(sard::apply_rule(rule, samples) ==
        doctest::Approx(sard::g1(t)).epsilon(1e-9));

  std::vector<double> wrong(3, 1.0);
  CHECK_THROWS_AS(sard::apply_rule(rule, wrong), sard::InvalidInputError);
}

TEST_CASE("apply_rule is linear in the integrand") {
  const sard::GridSpec grid = sard::make_grid(8);
  const sard::QuadratureRule rule = sard::coefficients(grid, sard::Singularity(t_s2));
  std::vector<double> phi(grid.nodes.size());
  std::vector<double> psi(grid.nodes.size());
  std::vector<double> mix(grid.nodes.size());
  const double a = 1.75;
  const double b = -0.3125;  // both exactly representable
  for (std::size_t i = 0; i < phi.size(); ++i) {
    phi[i] = std::sin(3.0 * grid.nodes[i]);
    psi[i] = 1.0 / (1.0 + grid.nodes[i] * grid.nodes[i]);
    mix[i] = a * phi[i] + b * psi[i];
  }
  const double lhs = sard::apply_rule(rule, mix);
  const double rhs = a * sard::apply_rule(rule, phi) + b * sard::apply_rule(rule, psi);
  CHECK(std::abs(lhs - rhs) <= 4.0 * 2.2e-16 * std::max(1.0, std::abs(lhs)));
}

TEST_CASE("estimate_order on exact ratios") {
  const std::vector<double> doubling = {4e-4, 1e-4};
  auto orders = sard::estimate_order(doubling);
  REQUIRE(orders.size() == 1);
  CHECK(*orders[0] == 2.0);

  const std::vector<double> flat = {1e-3, 1e-3};
  CHECK(*sard::estimate_order(flat)[0] == 0.0);

  const std::vector<double> cubic = {8e-5, 1e-5};
  CHECK(*sard::estimate_order(cubic)[0] == 3.0);

  const std::vector<double> with_zero = {1e-4, 0.0, 1e-6};
  auto partial = sard::estimate_order(with_zero);
  REQUIRE(partial.size() == 2);
  CHECK_FALSE(partial[0].has_value());
  CHECK_FALSE(partial[1].has_value());

  CHECK_THROWS_AS(sard::estimate_order(std::vector<double>{1e-3}), sard::InvalidInputError);
}

TEST_CASE("convergence_study bookkeeping") {
  const std::vector<int> ns = {8, 16, 32};
  const sard::ConvergenceReport report =
      sard::convergence_study(*sard::find_catalog("x2"), sard::Singularity(t_pi), ns);
  REQUIRE(report.rows.size() == 3);
  REQUIRE(report.orders.size() == 2);
  for (const sard::ConvergenceRow& row : report.rows) {
    CHECK_FALSE(row.skipped);
    CHECK(std::isfinite(row.abs_error));
  }
  CHECK(report.rows[0].abs_error > report.rows[1].abs_error);
  CHECK(report.rows[1].abs_error > report.rows[2].abs_error);
  CHECK(report.orders[0].has_value());

  CHECK_THROWS_AS(sard::convergence_study(*sard::find_catalog("x2"),
                                          sard::Singularity(t_pi), std::vector<int>{8, 8}),
                  sard::InvalidInputError);
  CHECK_THROWS_AS(sard::convergence_study(*sard::find_catalog("x2"),
                                          sard::Singularity(t_pi), std::vector<int>{1, 4}),
                  sard::InvalidInputError);
}

TEST_CASE("convergence_study annotates node collisions") {
  // t = 1/2 is a node of every even n but not of n = 3
  const std::vector<int> ns = {2, 3};
  const sard::ConvergenceReport report =
      sard::convergence_study(*sard::find_catalog("x2"), sard::Singularity(0.5), ns);
  REQUIRE(report.rows.size() == 2);
  CHECK(report.rows[0].skipped);
  CHECK(report.rows[0].note.find("node collision") != std::string::npos);
  CHECK_FALSE(report.rows[1].skipped);
  REQUIRE(report.orders.size() == 1);
  CHECK_FALSE(report.orders[0].has_value());
}

TEST_CASE("rule is exact on x for every n, errors stay below 1e-9") {
  const std::vector<int> ns = {4, 8, 16, 32};
  const sard::ConvergenceReport report =
      sard::convergence_study(*sard::find_catalog("x"), sard::Singularity(t_s2), ns);
  for (const sard::ConvergenceRow& row : report.rows) {
    CHECK(row.abs_error <= 1e-9);
  }
}

TEST_CASE("errors decrease monotonically on smooth integrands") {
  for (const char* id : {"x2", "x3", "inv1p", "exp"}) {
    const std::vector<int> ns = {16, 32, 64};
    const sard::ConvergenceReport report =
        sard::convergence_study(*sard::find_catalog(id), sard::Singularity(t_pi), ns);
    CHECK(report.rows[0].abs_error > report.rows[1].abs_error);
    CHECK(report.rows[1].abs_error > report.rows[2].abs_error);
  }
}

}  // TEST_SUITE
