#include "chermnykh/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace chermnykh {

namespace {

constexpr double k_event_radius = 1e-9;  // close-approach cutoff at either primary
constexpr double k_min_step = 1e-14;
constexpr double k_event_tol = 1e-9;

// Dormand-Prince 5(4) coefficients.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

using Y = std::array<double, 4>;  // x, y, vx, vy

Y deriv(const SystemParams& p, const Y& y) {
  Vec2 g = grad_omega(p, y[0], y[1]);
  return {y[2], y[3], g.x + 2.0 * p.n * y[3], g.y - 2.0 * p.n * y[2]};
}

bool finite(const Y& y) {
  return std::isfinite(y[0]) && std::isfinite(y[1]) && std::isfinite(y[2]) && std::isfinite(y[3]);
}

double min_primary_dist(const SystemParams& p, double x, double y) {
  double r1 = std::hypot(x + p.mu, y);
  double r2 = std::hypot(x + p.mu - 1.0, y);
  return std::min(r1, r2);
}

double error_norm(const Y& e, const Y& y0, const Y& y1, double atol, double rtol) {
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    double q = e[i] / sc;
    sum += q * q;
  }
  return std::sqrt(sum / 4.0);
}

struct HermiteStep {
  double t0, h;
  Y y0, f0, y1, f1;

  Y at(double t) const {
    double th = (t - t0) / h;
    double th2 = th * th, th3 = th2 * th;
    double h00 = 2.0 * th3 - 3.0 * th2 + 1.0;
    double h10 = th3 - 2.0 * th2 + th;
    double h01 = -2.0 * th3 + 3.0 * th2;
    double h11 = th3 - th2;
    Y y;
    for (int i = 0; i < 4; ++i)
      y[i] = h00 * y0[i] + h * h10 * f0[i] + h01 * y1[i] + h * h11 * f1[i];
    return y;
  }
};

double initial_step(const SystemParams& p, const Y& y0, const Y& f0, const IntegratorConfig& cfg) {
  double d0 = 0.0, d1 = 0.0;
  for (int i = 0; i < 4; ++i) {
    double sc = cfg.abs_tol + cfg.rel_tol * std::abs(y0[i]);
    d0 += (y0[i] / sc) * (y0[i] / sc);
    d1 += (f0[i] / sc) * (f0[i] / sc);
  }
  d0 = std::sqrt(d0 / 4.0);
  d1 = std::sqrt(d1 / 4.0);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, cfg.t_end);

  double h1;
  try {
    Y y1;
    for (int i = 0; i < 4; ++i) y1[i] = y0[i] + h0 * f0[i];
    Y f1 = deriv(p, y1);
    double d2 = 0.0;
    for (int i = 0; i < 4; ++i) {
      double sc = cfg.abs_tol + cfg.rel_tol * std::abs(y0[i]);
      double q = (f1[i] - f0[i]) / sc;
      d2 += q * q;
    }
    d2 = std::sqrt(d2 / 4.0) / h0;
    double dm = std::max(d1, d2);
    h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
  } catch (const singularity_error&) {
    h1 = 1e-6;
  }
  return std::min({100.0 * h0, h1, cfg.max_step, cfg.t_end});
}

}  // namespace

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::Completed: return "Completed";
    case Termination::Escaped: return "Escaped";
    case Termination::SingularityHit: return "SingularityHit";
    case Termination::StepUnderflow: return "StepUnderflow";
  }
  return "?";
}

Deriv rhs(const SystemParams& p, const State& s) {
  Y d = deriv(p, {s.x, s.y, s.vx, s.vy});
  return {d[0], d[1], d[2], d[3]};
}

Trajectory integrate(const SystemParams& p, const State& initial, const IntegratorConfig& cfg) {
  auto bad = [](const char* msg) { throw param_error(msg); };
  if (!std::isfinite(cfg.rel_tol) || cfg.rel_tol < 100.0 * std::numeric_limits<double>::epsilon())
    bad("rel_tol must be at least 100 times machine epsilon");
  if (!std::isfinite(cfg.abs_tol) || cfg.abs_tol <= 0.0) bad("abs_tol must be positive");
  if (!std::isfinite(cfg.max_step) || cfg.max_step <= 0.0) bad("max_step must be positive");
  if (!std::isfinite(cfg.t_end) || cfg.t_end <= 0.0) bad("t_end must be positive");
  if (!std::isfinite(cfg.escape_radius) || cfg.escape_radius <= 0.0)
    bad("escape_radius must be positive");
  if (!std::isfinite(cfg.sample_interval) || cfg.sample_interval < 0.0)
    bad("sample_interval must be nonnegative");

  if (!std::isfinite(initial.t) || !std::isfinite(initial.x) || !std::isfinite(initial.y) ||
      !std::isfinite(initial.vx) || !std::isfinite(initial.vy))
    throw integration_error("initial state is not finite");
  if (min_primary_dist(p, initial.x, initial.y) < k_event_radius)
    throw integration_error("initial state coincides with a primary");

  const double t_start = initial.t;
  const double t_final = t_start + cfg.t_end;
  const double interval = cfg.sample_interval > 0.0 ? cfg.sample_interval : cfg.t_end / 2000.0;
  const double x_ref = initial.x, y_ref = initial.y;

  Trajectory out;
  out.termination = Termination::Completed;
  out.t_event = t_final;

  auto push_sample = [&](double t, const Y& y) {
    State s{t, y[0], y[1], y[2], y[3]};
    out.samples.push_back({s, jacobi_energy(p, s).e, std::hypot(y[0] - x_ref, y[1] - y_ref)});
  };

  double t = t_start;
  Y y{initial.x, initial.y, initial.vx, initial.vy};
  Y f = deriv(p, y);
  push_sample(t, y);
  long next_k = 1;  // next sample grid index

  double h = initial_step(p, y, f, cfg);
  double err_prev = 1e-4;
  bool just_rejected = false;

  // Interior grid points only; the final row is pushed separately at exactly
  // the end or event epoch, so emission stops half an interval short of it.
  auto emit_until = [&](const HermiteStep& hs, double t1, double cutoff) {
    while (true) {
      double tg = t_start + next_k * interval;
      if (tg > t1 || tg >= cutoff - 0.5 * interval) break;
      push_sample(tg, hs.at(tg));
      ++next_k;
    }
  };

  while (t < t_final) {
    h = std::min({h, cfg.max_step, t_final - t});
    if (h < k_min_step) {
      out.termination = Termination::StepUnderflow;
      out.t_event = t;
      break;
    }

    Y k1 = f, k2, k3, k4, k5, k6, k7, ynew;
    double err;
    try {
      Y w;
      for (int i = 0; i < 4; ++i) w[i] = y[i] + h * a21 * k1[i];
      k2 = deriv(p, w);
      for (int i = 0; i < 4; ++i) w[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
      k3 = deriv(p, w);
      for (int i = 0; i < 4; ++i) w[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      k4 = deriv(p, w);
      for (int i = 0; i < 4; ++i)
        w[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      k5 = deriv(p, w);
      for (int i = 0; i < 4; ++i)
        w[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
      k6 = deriv(p, w);
      for (int i = 0; i < 4; ++i)
        ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
      k7 = deriv(p, ynew);  // FSAL

      Y ev;
      for (int i = 0; i < 4; ++i)
        ev[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      err = error_norm(ev, y, ynew, cfg.abs_tol, cfg.rel_tol);
      if (!finite(ynew) || !std::isfinite(err)) err = std::numeric_limits<double>::infinity();
    } catch (const singularity_error&) {
      h *= 0.5;
      just_rejected = true;
      continue;
    }

    if (std::isinf(err)) {
      h *= 0.5;
      just_rejected = true;
      continue;
    }

    double factor = 0.9 * std::pow(err, -0.14) * std::pow(err_prev, 0.08);
    factor = std::clamp(factor, 0.2, 5.0);
    if (just_rejected) factor = std::min(factor, 1.0);

    if (err > 1.0) {
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
      just_rejected = true;
      continue;
    }

    double t1 = t + h;
    if (t_final - t1 < k_min_step) t1 = t_final;
    HermiteStep hs{t, h, y, k1, ynew, k7};

    // Events: threshold predicates on the dense output, earliest epoch wins.
    auto escaped = [&](const Y& s) {
      return std::hypot(s[0] - x_ref, s[1] - y_ref) >= cfg.escape_radius;
    };
    auto singular = [&](const Y& s) { return min_primary_dist(p, s[0], s[1]) <= k_event_radius; };
    auto locate = [&](auto&& pred) {
      double lo = t, hi = t1;
      while (hi - lo > k_event_tol) {
        double mid = 0.5 * (lo + hi);
        if (pred(hs.at(mid)))
          hi = mid;
        else
          lo = mid;
      }
      return hi;
    };

    bool esc = escaped(ynew);
    bool sng = singular(ynew);
    if (esc || sng) {
      double t_esc = esc ? locate(escaped) : std::numeric_limits<double>::infinity();
      double t_sng = sng ? locate(singular) : std::numeric_limits<double>::infinity();
      double te = std::min(t_esc, t_sng);
      out.termination = t_esc <= t_sng ? Termination::Escaped : Termination::SingularityHit;
      out.t_event = te;
      emit_until(hs, t1, te);
      if (out.samples.back().s.t != te) push_sample(te, hs.at(te));
      break;
    }

    emit_until(hs, t1, t_final);
    t = t1;
    y = ynew;
    f = k7;
    err_prev = std::max(err, 1e-4);
    just_rejected = false;
    h *= factor;
  }

  double t_last = out.termination == Termination::Completed ? t_final : out.t_event;
  if (out.samples.back().s.t != t_last &&
      (out.termination == Termination::Completed || out.termination == Termination::StepUnderflow))
    push_sample(t_last, y);

  double e0 = out.samples.front().e;
  double drift = 0.0;
  for (const auto& s : out.samples) drift = std::max(drift, std::abs(s.e - e0));
  out.energy_drift = drift;
  return out;
}

}  // namespace chermnykh
