#pragma once
#include <vector>

#include "chermnykh/model.hpp"

namespace chermnykh {

enum class PointIndex { L1, L2, L3, L4, L5 };

const char* point_name(PointIndex index);

struct LagrangePoint {
  PointIndex index;
  double x, y;
  double residual;     // max-norm of grad_omega at (x, y)
  int iterations;
  bool multiple_roots; // more than one axis root found in the region
};

// Truncated-series seeds for the collinear points; L1/L2/L3 only.
double taylor_seed(PointIndex index, double mu);

// Root of Omega_x(x, 0) = 0 inside the index's axis region. Bracket expansion
// from the series seed, bisection, then Newton polish with the analytic
// Omega_xx. When several axis roots exist the one nearest the region's
// primary-adjacent boundary is returned and multiple_roots is set.
LagrangePoint solve_collinear(const SystemParams& p, PointIndex index, double tol = 1e-12);

// 2D Newton on grad_omega = 0 seeded at (1/2 - mu, +-sqrt(3)/2). The iteration
// runs in barycentric polar coordinates: for small mu the angular direction of
// the Hessian degenerates to O(mu) and Cartesian steps either creep or jump
// basins, while polar steps stay well-scaled.
LagrangePoint solve_triangular(const SystemParams& p, PointIndex index, double tol = 1e-12);

// All five points in index order.
std::vector<LagrangePoint> locate_all(const SystemParams& p, double tol = 1e-12);

}  // namespace chermnykh
