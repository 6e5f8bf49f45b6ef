#pragma once
#include "chermnykh/errors.hpp"

namespace chermnykh {

inline constexpr double mu_sun_earth = 3.00348e-6;
inline constexpr double mu_sun_jupiter = 9.537e-4;

// Full parameter set of the perturbed rotating-frame problem. mu is the mass
// ratio, q1 the radiation mass-reduction factor, a2 the oblateness coefficient
// of the second primary, mb the belt mass and t_belt the lumped belt profile
// parameter. n and rc are derived once in make_params and never change.
struct SystemParams {
  double mu;
  double q1;
  double a2;
  double mb;
  double t_belt;
  double n;   // perturbed mean motion, n^2 = 1 + 3 a2/2 + 2 mb rc/(rc^2+T^2)^{3/2}
  double rc;  // belt reference radius, rc^2 = (1-mu) q1^{2/3} + mu^2
};

struct State {
  double t;
  double x, y;
  double vx, vy;
};

struct Vec2 {
  double x, y;
};

struct Sym2 {
  double xx, xy, yy;
};

struct Energy {
  double e;  // Jacobi energy, (v^2)/2 - Omega
  double c;  // Jacobi constant, -2E
};

SystemParams make_params(double mu, double q1, double a2, double mb, double t_belt);

// A2 = (re^2 - rp^2) / (5 separation^2)
double oblateness_from_radii(double re, double rp, double separation = 1.0);

// q1 = 1 - fp/fg
double mass_reduction_from_forces(double fp, double fg);

double omega(const SystemParams& p, double x, double y);
Vec2 grad_omega(const SystemParams& p, double x, double y);
Sym2 hess_omega(const SystemParams& p, double x, double y);
Energy jacobi_energy(const SystemParams& p, const State& s);

}  // namespace chermnykh
