#pragma once

#include <vector>

namespace sard {

/// Reject t when it comes this close to a grid node; the rule construction
/// excludes t = h*beta and the log term in the right-hand side loses all
/// accuracy below this scale.
inline constexpr double node_collision_tolerance = 1e-10;

/// Uniform grid on [0,1]: n subintervals, nodes h*beta for beta = 0..n.
struct GridSpec {
  int n = 0;
  double h = 0.0;
  std::vector<double> nodes;
};

/// n >= 2 subintervals; throws InvalidInputError otherwise.
GridSpec make_grid(int n);

/// Location of the Cauchy singularity, validated to lie strictly inside (0,1).
class Singularity {
 public:
  explicit Singularity(double t);
  double value() const { return t_; }

 private:
  double t_;
};

/// Right-hand-side data of the defining system for one (grid, t) pair:
/// f[beta] = (1/12) pv-int |x - h*beta|^3 / (x - t) dx, plus the two moments.
struct RhsData {
  std::vector<double> f;
  double g0 = 0.0;
  double g1 = 0.0;
};

/// pv-int_0^1 dx/(x-t) = ln((1-t)/t), computed as ln(1-t) - ln(t).
double g0(Singularity t);

/// pv-int_0^1 x/(x-t) dx = 1 + t*g0(t).
double g1(Singularity t);

/// Closed form of f(h*beta, t). Throws NodeCollisionError when t is within
/// `collision_tol` of the node.
double f_value(const GridSpec& grid, int beta, Singularity t,
               double collision_tol = node_collision_tolerance);

/// f over all nodes plus the moments. Checks every node for collision first.
RhsData rhs_vector(const GridSpec& grid, Singularity t,
                   double collision_tol = node_collision_tolerance);

/// Throws NodeCollisionError if t is within tol of any node of the grid.
void require_no_collision(const GridSpec& grid, Singularity t,
                          double tol = node_collision_tolerance);

}  // namespace sard
