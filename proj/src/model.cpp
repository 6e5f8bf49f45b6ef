#include "chermnykh/model.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace chermnykh {

namespace {

constexpr double k_primary_guard = 1e-12;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void reject(const char* field, const char* requirement, double got) {
  throw param_error(std::string(field) + " must " + requirement + ", got " + num(got));
}

struct Radii {
  double r1, r2;
};

Radii radii_checked(const SystemParams& p, double x, double y) {
  double r1 = std::hypot(x + p.mu, y);
  double r2 = std::hypot(x + p.mu - 1.0, y);
  if (r1 < k_primary_guard)
    throw singularity_error("evaluation within 1e-12 of the first primary (r1 = " + num(r1) + ")");
  if (r2 < k_primary_guard)
    throw singularity_error("evaluation within 1e-12 of the second primary (r2 = " + num(r2) + ")");
  return {r1, r2};
}

}  // namespace

SystemParams make_params(double mu, double q1, double a2, double mb, double t_belt) {
  if (!std::isfinite(mu) || mu <= 0.0 || mu >= 0.5) reject("mu", "lie in (0, 0.5)", mu);
  if (!std::isfinite(q1) || q1 <= 0.0 || q1 > 1.0) reject("q1", "lie in (0, 1]", q1);
  if (!std::isfinite(a2) || a2 < 0.0) reject("a2", "be >= 0", a2);
  if (!std::isfinite(mb) || mb < 0.0) reject("mb", "be >= 0", mb);
  if (!std::isfinite(t_belt) || t_belt < 0.0) reject("t_belt", "be >= 0", t_belt);

  SystemParams p{mu, q1, a2, mb, t_belt, 0.0, 0.0};
  double rc2 = (1.0 - mu) * std::pow(q1, 2.0 / 3.0) + mu * mu;
  p.rc = std::sqrt(rc2);
  double n2 = 1.0 + 1.5 * a2 + 2.0 * mb * p.rc / std::pow(rc2 + t_belt * t_belt, 1.5);
  p.n = std::sqrt(n2);
  return p;
}

double oblateness_from_radii(double re, double rp, double separation) {
  if (!std::isfinite(rp) || rp <= 0.0) reject("rp", "be > 0", rp);
  if (!std::isfinite(re) || re < rp)
    throw param_error("re must be >= rp, got re = " + num(re) + ", rp = " + num(rp));
  if (!std::isfinite(separation) || separation <= 0.0) reject("separation", "be > 0", separation);
  return (re * re - rp * rp) / (5.0 * separation * separation);
}

double mass_reduction_from_forces(double fp, double fg) {
  if (!std::isfinite(fg) || fg <= 0.0) reject("fg", "be > 0", fg);
  if (!std::isfinite(fp) || fp < 0.0) reject("fp", "be >= 0", fp);
  if (fp >= fg)
    throw param_error("fp must be < fg so that q1 stays in (0, 1], got fp = " + num(fp) +
                      ", fg = " + num(fg));
  return 1.0 - fp / fg;
}

double omega(const SystemParams& p, double x, double y) {
  auto [r1, r2] = radii_checked(p, x, y);
  double r2c = r2 * r2 * r2;
  double s = x * x + y * y + p.t_belt * p.t_belt;
  return p.n * p.n * (x * x + y * y) / 2.0 + (1.0 - p.mu) * p.q1 / r1 + p.mu / r2 +
         p.mu * p.a2 / (2.0 * r2c) + p.mb / std::sqrt(s);
}

Vec2 grad_omega(const SystemParams& p, double x, double y) {
  auto [r1, r2] = radii_checked(p, x, y);
  double u1 = x + p.mu;
  double u2 = x + p.mu - 1.0;
  double r1c = r1 * r1 * r1;
  double r2c = r2 * r2 * r2;
  double r2f = r2c * r2 * r2;
  double s = x * x + y * y + p.t_belt * p.t_belt;
  double s32 = s * std::sqrt(s);
  double n2 = p.n * p.n;
  double gx = n2 * x - (1.0 - p.mu) * p.q1 * u1 / r1c - p.mu * u2 / r2c -
              1.5 * p.mu * p.a2 * u2 / r2f - p.mb * x / s32;
  double gy = n2 * y - (1.0 - p.mu) * p.q1 * y / r1c - p.mu * y / r2c -
              1.5 * p.mu * p.a2 * y / r2f - p.mb * y / s32;
  return {gx, gy};
}

Sym2 hess_omega(const SystemParams& p, double x, double y) {
  auto [r1, r2] = radii_checked(p, x, y);
  double u1 = x + p.mu;
  double u2 = x + p.mu - 1.0;
  double r1c = r1 * r1 * r1;
  double r1v = r1c * r1 * r1;
  double r2c = r2 * r2 * r2;
  double r2v = r2c * r2 * r2;
  double r2s = r2v * r2 * r2;
  double s = x * x + y * y + p.t_belt * p.t_belt;
  double s32 = s * std::sqrt(s);
  double s52 = s32 * s;
  double n2 = p.n * p.n;
  double mq = (1.0 - p.mu) * p.q1;

  double xx = n2 - mq * (1.0 / r1c - 3.0 * u1 * u1 / r1v) -
              p.mu * (1.0 / r2c - 3.0 * u2 * u2 / r2v) -
              1.5 * p.mu * p.a2 * (1.0 / r2v - 5.0 * u2 * u2 / r2s) -
              p.mb * (1.0 / s32 - 3.0 * x * x / s52);
  double yy = n2 - mq * (1.0 / r1c - 3.0 * y * y / r1v) -
              p.mu * (1.0 / r2c - 3.0 * y * y / r2v) -
              1.5 * p.mu * p.a2 * (1.0 / r2v - 5.0 * y * y / r2s) -
              p.mb * (1.0 / s32 - 3.0 * y * y / s52);
  double xy = 3.0 * mq * u1 * y / r1v + 3.0 * p.mu * u2 * y / r2v +
              7.5 * p.mu * p.a2 * u2 * y / r2s + 3.0 * p.mb * x * y / s52;
  return {xx, xy, yy};
}

Energy jacobi_energy(const SystemParams& p, const State& s) {
  double e = 0.5 * (s.vx * s.vx + s.vy * s.vy) - omega(p, s.x, s.y);
  return {e, -2.0 * e};
}

}  // namespace chermnykh
