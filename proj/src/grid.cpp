#include "sard/grid.hpp"

#include <cmath>
#include <string>

#include "sard/errors.hpp"

namespace sard {

GridSpec make_grid(int n) {
  if (n < 2) {
    throw InvalidInputError("grid requires at least 2 subintervals, got " + std::to_string(n));
  }
  GridSpec grid;
  grid.n = n;
  grid.h = 1.0 / n;
  grid.nodes.resize(static_cast<std::size_t>(n) + 1);
  for (int beta = 0; beta <= n; ++beta) {
    // i/n instead of i*h so that nodes[n] is exactly 1
    grid.nodes[static_cast<std::size_t>(beta)] = static_cast<double>(beta) / n;
  }
  return grid;
}

Singularity::Singularity(double t) : t_(t) {
  if (!(t > 0.0 && t < 1.0)) {
    throw InvalidInputError("singularity must lie strictly inside (0,1), got " +
                            std::to_string(t));
  }
}

double g0(Singularity t) {
  const double tv = t.value();
  return std::log(1.0 - tv) - std::log(tv);
}

double g1(Singularity t) { return 1.0 + t.value() * g0(t); }

void require_no_collision(const GridSpec& grid, Singularity t, double tol) {
  const double tv = t.value();
  for (std::size_t beta = 0; beta < grid.nodes.size(); ++beta) {
    if (std::abs(tv - grid.nodes[beta]) <= tol) {
      throw NodeCollisionError("singularity t = " + std::to_string(tv) +
                               " collides with grid node " + std::to_string(beta));
    }
  }
}

double f_value(const GridSpec& grid, int beta, Singularity t, double collision_tol) {
  if (beta < 0 || beta > grid.n) {
    throw InvalidInputError("node index " + std::to_string(beta) + " outside 0.." +
                            std::to_string(grid.n));
  }
  const double s = grid.nodes[static_cast<std::size_t>(beta)];
  const double tv = t.value();
  if (std::abs(tv - s) <= collision_tol) {
    throw NodeCollisionError("singularity t = " + std::to_string(tv) +
                             " collides with grid node " + std::to_string(beta));
  }
  const double poly = -11.0 / 3.0 * s * s * s + (5.0 * tv + 3.0) * s * s -
                      (2.0 * tv * tv + 3.0 * tv + 1.5) * s +
                      (tv * tv + tv / 2.0 + 1.0 / 3.0);
  // ln(t - t^2) split as ln t + ln(1-t) to dodge underflow near the endpoints
  const double d = tv - s;
  const double logs = -2.0 * std::log(std::abs(s - tv)) + std::log(tv) + std::log(1.0 - tv);
  return (poly + d * d * d * logs) / 12.0;
}

RhsData rhs_vector(const GridSpec& grid, Singularity t, double collision_tol) {
  require_no_collision(grid, t, collision_tol);
  RhsData rhs;
  rhs.f.resize(grid.nodes.size());
  for (int beta = 0; beta <= grid.n; ++beta) {
    rhs.f[static_cast<std::size_t>(beta)] = f_value(grid, beta, t, collision_tol);
  }
  rhs.g0 = g0(t);
  rhs.g1 = g1(t);
  return rhs;
}

}  // namespace sard
