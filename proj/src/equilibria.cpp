#include "chermnykh/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace chermnykh {

namespace {

constexpr double k_boundary_buffer = 1e-9;  // keep brackets off the primaries
constexpr double k_region_cap = 10.0;       // practical cap for the unbounded regions
constexpr int k_iteration_cap = 64;
constexpr int k_scan_points = 4096;

double axis_gx(const SystemParams& p, double x) { return grad_omega(p, x, 0.0).x; }

struct Region {
  double lo, hi;
  bool primary_adjacent_hi;  // tie-break end: true -> prefer larger x
};

Region region_of(const SystemParams& p, PointIndex index) {
  switch (index) {
    case PointIndex::L1:
      return {p.mu, 1.0 - p.mu - k_boundary_buffer, true};
    case PointIndex::L2:
      return {1.0 - p.mu + k_boundary_buffer, k_region_cap, false};
    case PointIndex::L3:
      return {-k_region_cap, -p.mu - k_boundary_buffer, true};
    default:
      throw param_error("collinear region requested for a triangular index");
  }
}

struct AxisRoot {
  double x;
  int iterations;
};

// Bisect to width 1e-8, then Newton with the analytic Omega_xx.
AxisRoot converge_axis_root(const SystemParams& p, double a, double b, double fa, double tol) {
  int used = 0;
  while (b - a > 1e-8) {
    double m = 0.5 * (a + b);
    double fm = axis_gx(p, m);
    ++used;
    if (fm == 0.0) {
      a = b = m;
      break;
    }
    if ((fa < 0.0) == (fm < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  double x = 0.5 * (a + b);
  for (int i = 0; i < k_iteration_cap; ++i) {
    double f = axis_gx(p, x);
    ++used;
    if (std::abs(f) < tol) return {x, used};
    double fp = hess_omega(p, x, 0.0).xx;
    double step = f / fp;
    if (!std::isfinite(step)) break;
    x -= step;
    if (x <= a - 1e-6 || x >= b + 1e-6) {  // left the bracket: fall back to its midpoint
      x = 0.5 * (a + b);
    }
  }
  if (std::abs(axis_gx(p, x)) >= tol)
    throw solver_error("collinear Newton polish did not reach the residual tolerance");
  return {x, used};
}

}  // namespace

const char* point_name(PointIndex index) {
  switch (index) {
    case PointIndex::L1: return "L1";
    case PointIndex::L2: return "L2";
    case PointIndex::L3: return "L3";
    case PointIndex::L4: return "L4";
    case PointIndex::L5: return "L5";
  }
  return "?";
}

double taylor_seed(PointIndex index, double mu) {
  if (!(mu > 0.0 && mu < 0.5)) throw param_error("taylor_seed requires mu in (0, 0.5)");
  double c = std::cbrt(mu / 3.0);
  switch (index) {
    case PointIndex::L1:
      return 1.0 - c + c * c / 3.0 - 26.0 * mu / 27.0;
    case PointIndex::L2:
      return 1.0 + c + c * c / 3.0 - 28.0 * mu / 27.0;
    case PointIndex::L3:
      return -1.0 - 5.0 * mu / 12.0 + 1127.0 * mu * mu * mu / 20736.0 +
             7889.0 * mu * mu * mu * mu / 248832.0;
    default:
      throw param_error("taylor_seed is defined for the collinear points only");
  }
}

LagrangePoint solve_collinear(const SystemParams& p, PointIndex index, double tol) {
  Region reg = region_of(p, index);
  if (!(reg.lo < reg.hi))
    throw solver_error(std::string(point_name(index)) +
                       ": axis region is empty for these parameters");

  double seed = std::clamp(taylor_seed(index, p.mu), reg.lo, reg.hi);

  // Expand a bracket around the seed until it sees a sign change or fills the region.
  double w = 0.05;
  double a, b;
  for (;;) {
    a = std::max(reg.lo, seed - w);
    b = std::min(reg.hi, seed + w);
    bool full = (a == reg.lo && b == reg.hi);
    if (axis_gx(p, a) * axis_gx(p, b) < 0.0 || full) break;
    w *= 2.0;
  }

  // Scan the bracket so coexisting roots (large belt masses) are all seen.
  std::vector<std::pair<double, double>> brackets;
  double prev_x = a;
  double prev_f = axis_gx(p, prev_x);
  for (int i = 1; i <= k_scan_points; ++i) {
    double cur_x = a + (b - a) * i / k_scan_points;
    double cur_f = axis_gx(p, cur_x);
    if (prev_f == 0.0)
      brackets.emplace_back(prev_x, prev_x);
    else if ((prev_f < 0.0) != (cur_f < 0.0))
      brackets.emplace_back(prev_x, cur_x);
    prev_x = cur_x;
    prev_f = cur_f;
  }
  if (brackets.empty() && prev_f == 0.0) brackets.emplace_back(prev_x, prev_x);
  if (brackets.empty())
    throw solver_error(std::string(point_name(index)) +
                       ": no sign change of the axis gradient in the region after bracket expansion");

  std::vector<AxisRoot> roots;
  roots.reserve(brackets.size());
  for (auto& [ra, rb] : brackets) {
    if (ra == rb)
      roots.push_back({ra, 0});
    else
      roots.push_back(converge_axis_root(p, ra, rb, axis_gx(p, ra), tol));
  }

  // Nearest the primary-adjacent boundary: largest x for L1/L3, smallest for L2.
  auto pick = reg.primary_adjacent_hi
                  ? std::max_element(roots.begin(), roots.end(),
                                     [](const AxisRoot& u, const AxisRoot& v) { return u.x < v.x; })
                  : std::min_element(roots.begin(), roots.end(),
                                     [](const AxisRoot& u, const AxisRoot& v) { return u.x < v.x; });

  LagrangePoint pt{index, pick->x, 0.0, 0.0, pick->iterations, roots.size() > 1};
  Vec2 g = grad_omega(p, pt.x, pt.y);
  pt.residual = std::max(std::abs(g.x), std::abs(g.y));
  return pt;
}

LagrangePoint solve_triangular(const SystemParams& p, PointIndex index, double tol) {
  if (index != PointIndex::L4 && index != PointIndex::L5)
    throw param_error("solve_triangular is defined for L4 and L5 only");
  double ysign = index == PointIndex::L4 ? 1.0 : -1.0;

  double x0 = 0.5 - p.mu;
  double y0 = ysign * std::sqrt(3.0) / 2.0;
  double rho = std::hypot(x0, y0);
  double th = std::atan2(y0, x0);
  double th_lo = ysign > 0.0 ? M_PI / 12.0 : -11.0 * M_PI / 12.0;
  double th_hi = ysign > 0.0 ? 11.0 * M_PI / 12.0 : -M_PI / 12.0;

  double x = x0, y = y0;
  for (int it = 0; it <= k_iteration_cap; ++it) {
    x = rho * std::cos(th);
    y = rho * std::sin(th);
    Vec2 g = grad_omega(p, x, y);
    double res = std::max(std::abs(g.x), std::abs(g.y));
    if (res < tol) {
      if (y * ysign <= 0.0)
        throw solver_error(std::string(point_name(index)) +
                           ": triangular iteration converged outside its half-plane");
      return {index, x, y, res, it, false};
    }
    if (it == k_iteration_cap) break;

    Sym2 h = hess_omega(p, x, y);
    double grho = (x * g.x + y * g.y) / rho;
    double gth = -y * g.x + x * g.y;
    double hrr = (x * x * h.xx + 2.0 * x * y * h.xy + y * y * h.yy) / (rho * rho);
    double htt = y * y * h.xx - 2.0 * x * y * h.xy + x * x * h.yy - (x * g.x + y * g.y);
    double hrt = (-x * y * h.xx + (x * x - y * y) * h.xy + x * y * h.yy + gth) / rho;
    double det = hrr * htt - hrt * hrt;
    double drho, dth;
    if (det != 0.0 && std::isfinite(det)) {
      drho = -(htt * grho - hrt * gth) / det;
      dth = -(-hrt * grho + hrr * gth) / det;
    } else {  // degenerate: decoupled diagonal steps
      drho = hrr != 0.0 ? -grho / hrr : 0.0;
      dth = htt != 0.0 ? -gth / htt : 0.0;
    }
    drho = std::clamp(drho, -0.3 * rho, 0.3 * rho);
    dth = std::clamp(dth, -0.3, 0.3);
    rho += drho;
    th = std::clamp(th + dth, th_lo, th_hi);
  }
  throw solver_error(std::string(point_name(index)) +
                     ": triangular iteration exceeded 64 steps without converging");
}

std::vector<LagrangePoint> locate_all(const SystemParams& p, double tol) {
  return {solve_collinear(p, PointIndex::L1, tol), solve_collinear(p, PointIndex::L2, tol),
          solve_collinear(p, PointIndex::L3, tol), solve_triangular(p, PointIndex::L4, tol),
          solve_triangular(p, PointIndex::L5, tol)};
}

}  // namespace chermnykh
