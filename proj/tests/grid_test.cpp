#include <cmath>
#include <limits>

#include "doctest.h"
#include "sard/errors.hpp"
#include "sard/grid.hpp"

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

const double t_pi = 1.0 / 3.14159265358979323846;
const double t_e = 0.36787944117144233;

}  // namespace

TEST_SUITE("grid") {

TEST_CASE("make_grid lays out uniform nodes") {
  const sard::GridSpec g2 = sard::make_grid(2);
  CHECK(g2.n == 2);
  CHECK(g2.h == 0.5);
  REQUIRE(g2.nodes.size() == 3);
  CHECK(g2.nodes[0] == 0.0);
  CHECK(g2.nodes[1] == 0.5);
  CHECK(g2.nodes[2] == 1.0);

  const sard::GridSpec g4 = sard::make_grid(4);
  REQUIRE(g4.nodes.size() == 5);
  CHECK(g4.nodes[1] == 0.25);
  CHECK(g4.nodes[3] == 0.75);

  // endpoints exact and nodes strictly increasing even for odd n
  for (int n : {2, 3, 5, 7, 64, 1000}) {
    const sard::GridSpec g = sard::make_grid(n);
    CHECK(g.nodes.front() == 0.0);
    CHECK(g.nodes.back() == 1.0);
    CHECK(std::abs(g.h * n - 1.0) <= eps);
    for (std::size_t i = 1; i < g.nodes.size(); ++i) {
      CHECK(g.nodes[i] > g.nodes[i - 1]);
    }
  }
}

TEST_CASE("make_grid rejects fewer than two subintervals") {
  CHECK_THROWS_AS(sard::make_grid(1), sard::InvalidInputError);
  CHECK_THROWS_AS(sard::make_grid(0), sard::InvalidInputError);
  CHECK_THROWS_AS(sard::make_grid(-4), sard::InvalidInputError);
}

TEST_CASE("singularity must lie strictly inside (0,1)") {
  CHECK_NOTHROW(sard::Singularity(0.5));
  CHECK_THROWS_AS(sard::Singularity(0.0), sard::InvalidInputError);
  CHECK_THROWS_AS(sard::Singularity(1.0), sard::InvalidInputError);
  CHECK_THROWS_AS(sard::Singularity(-0.2), sard::InvalidInputError);
  CHECK_THROWS_AS(sard::Singularity(1.7), sard::InvalidInputError);
  CHECK_THROWS_AS(sard::Singularity(std::numeric_limits<double>::quiet_NaN()),
                  sard::InvalidInputError);
}

TEST_CASE("g0 matches the log closed form") {
  CHECK(sard::g0(sard::Singularity(0.5)) == 0.0);
  CHECK(sard::g0(sard::Singularity(0.25)) == doctest::Approx(std::log(3.0)).epsilon(1e-15));
  CHECK(sard::g0(sard::Singularity(0.75)) == doctest::Approx(-std::log(3.0)).epsilon(1e-15));
}

TEST_CASE("g0 antisymmetry under t -> 1-t") {
  for (double t : {0.1, 0.25, 0.3, t_pi, t_e, 0.5, 0.62, 0.9}) {
    const double a = sard::g0(sard::Singularity(t));
    const double b = sard::g0(sard::Singularity(1.0 - t));
    CHECK(std::abs(a + b) <= 4.0 * eps * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("g1 closed form and its algebraic tie to g0") {
  CHECK(sard::g1(sard::Singularity(0.5)) == 1.0);
  CHECK(sard::g1(sard::Singularity(0.25)) ==
        doctest::Approx(1.0 + 0.25 * std::log(3.0)).epsilon(1e-15));
  for (double t : {0.05, 0.2, t_pi, 0.5, t_e, 0.8, 0.95}) {
    const sard::Singularity s(t);
    const double lhs = sard::g1(s) - t * sard::g0(s);
    CHECK(std::abs(lhs - 1.0) <= 4.0 * eps);
  }
}

TEST_CASE("f_value at the analytically forced points") {
  const sard::GridSpec grid = sard::make_grid(4);
  const sard::Singularity half(0.5);
  // log terms cancel exactly at (h*beta, t) = (0, 1/2); the value is 5/72
  CHECK(sard::f_value(grid, 0, half) == doctest::Approx(5.0 / 72.0).epsilon(1e-15));
  // x -> 1-x negates the integral
  CHECK(sard::f_value(grid, 4, half) == doctest::Approx(-5.0 / 72.0).epsilon(1e-15));
}

TEST_CASE("f_value spot values frozen from high-precision integration") {
  CHECK(sard::f_value(sard::make_grid(4), 1, sard::Singularity(t_pi)) ==
        doctest::Approx(0.013360038808004026).epsilon(1e-13));
  CHECK(sard::f_value(sard::make_grid(2), 1, sard::Singularity(t_e)) ==
        doctest::Approx(-0.0032501685861452178).epsilon(1e-13));
  CHECK(sard::f_value(sard::make_grid(8), 1, sard::Singularity(0.137)) ==
        doctest::Approx(0.018955278823853696).epsilon(1e-13));
  CHECK(sard::f_value(sard::make_grid(8), 8, sard::Singularity(0.137)) ==
        doctest::Approx(-0.02722416220511).epsilon(1e-13));
}

TEST_CASE("f_value rejects node collisions") {
  const sard::GridSpec grid = sard::make_grid(2);
  CHECK_THROWS_AS(sard::f_value(grid, 1, sard::Singularity(0.5)), sard::NodeCollisionError);
  CHECK_THROWS_AS(sard::f_value(grid, 1, sard::Singularity(0.5 + 5e-11)),
                  sard::NodeCollisionError);
  CHECK_NOTHROW(sard::f_value(grid, 1, sard::Singularity(0.5 + 5e-10)));
  CHECK_THROWS_AS(sard::f_value(grid, 5, sard::Singularity(0.3)), sard::InvalidInputError);
}

TEST_CASE("f reflection: f(h*beta, t) = -f(h*(N-beta), 1-t)") {
  for (int n : {2, 5, 16}) {
    const sard::GridSpec grid = sard::make_grid(n);
    for (double t : {0.137, t_pi, 0.5 - 1e-3, 0.81}) {
      const sard::Singularity st(t);
      const sard::Singularity sr(1.0 - t);
      for (int beta = 0; beta <= n; ++beta) {
        const double a = sard::f_value(grid, beta, st);
        const double b = sard::f_value(grid, n - beta, sr);
        CHECK(std::abs(a + b) <= 1e-12 * std::max(1.0, std::abs(a)));
      }
    }
  }
}

TEST_CASE("rhs_vector bundles f with the moments") {
  const sard::GridSpec grid = sard::make_grid(4);
  const sard::Singularity t(t_e);
  const sard::RhsData rhs = sard::rhs_vector(grid, t);
  REQUIRE(rhs.f.size() == 5);
  for (int beta = 0; beta <= 4; ++beta) {
    CHECK(rhs.f[static_cast<std::size_t>(beta)] == sard::f_value(grid, beta, t));
    CHECK(std::isfinite(rhs.f[static_cast<std::size_t>(beta)]));
  }
  CHECK(rhs.g0 == sard::g0(t));
  CHECK(rhs.g1 == sard::g1(t));

  CHECK_THROWS_AS(sard::rhs_vector(sard::make_grid(2), sard::Singularity(0.5)),
                  sard::NodeCollisionError);
}

}  // TEST_SUITE
