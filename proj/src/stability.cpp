#include "chermnykh/stability.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace chermnykh {

Perturbation make_perturbation(double epsilon, double phi) {
  if (!std::isfinite(epsilon) || epsilon < 0.0 || epsilon >= 1.0)
    throw param_error("epsilon must lie in [0, 1)");
  if (!std::isfinite(phi)) throw param_error("phi must be finite");
  double two_pi = 2.0 * M_PI;
  double w = std::fmod(phi, two_pi);
  if (w < 0.0) w += two_pi;
  if (w >= two_pi) w = 0.0;
  return {epsilon, w};
}

State perturb_ic(Vec2 position, const Perturbation& pert) {
  return {0.0, position.x + pert.epsilon * std::cos(pert.phi),
          position.y + pert.epsilon * std::sin(pert.phi), 0.0, 0.0};
}

StabilityVerdict summarize(const Trajectory& tr, const Perturbation& pert) {
  StabilityVerdict v;
  v.perturbation = pert;
  v.bounded = tr.termination == Termination::Completed;
  if (!v.bounded) v.t_escape = tr.t_event;
  v.max_displacement = 0.0;
  for (const auto& s : tr.samples) v.max_displacement = std::max(v.max_displacement, s.r_local);
  v.energy_drift = tr.energy_drift;
  v.termination = tr.termination;
  return v;
}

StabilityVerdict classify(const SystemParams& p, Vec2 position, const Perturbation& pert,
                          const IntegratorConfig& cfg) {
  return summarize(integrate(p, perturb_ic(position, pert), cfg), pert);
}

std::vector<StabilityVerdict> sweep_direction(const SystemParams& p, Vec2 position, double epsilon,
                                              int n_phi, const IntegratorConfig& cfg) {
  if (n_phi < 1) throw param_error("n_phi must be at least 1");
  std::vector<StabilityVerdict> out(n_phi);
  for (int k = 0; k < n_phi; ++k) {
    double phi = 2.0 * M_PI * k / n_phi;
    try {
      out[k] = classify(p, position, make_perturbation(epsilon, phi), cfg);
    } catch (const std::exception& e) {
      out[k] = StabilityVerdict{};
      out[k].perturbation = {epsilon, phi};
      out[k].bounded = false;
      out[k].error = e.what();
    }
  }
  return out;
}

const char* sweep_field_name(SweepField f) {
  switch (f) {
    case SweepField::Q1: return "q1";
    case SweepField::A2: return "a2";
    case SweepField::Mb: return "mb";
    case SweepField::Epsilon: return "epsilon";
    case SweepField::Phi: return "phi";
  }
  return "?";
}

namespace {

double axis_value(const SweepAxis& ax, int i) {
  if (ax.count == 1) return ax.min;
  return ax.min + (ax.max - ax.min) * i / (ax.count - 1);
}

SweepCell run_cell(const SweepSpec& spec, const std::vector<double>& coords) {
  SweepCell cell;
  cell.coords = coords;
  double mu = spec.base.mu, q1 = spec.base.q1, a2 = spec.base.a2, mb = spec.base.mb,
         tb = spec.base.t_belt;
  double eps = spec.pert.epsilon, phi = spec.pert.phi;
  for (size_t a = 0; a < spec.axes.size(); ++a) {
    switch (spec.axes[a].field) {
      case SweepField::Q1: q1 = coords[a]; break;
      case SweepField::A2: a2 = coords[a]; break;
      case SweepField::Mb: mb = coords[a]; break;
      case SweepField::Epsilon: eps = coords[a]; break;
      case SweepField::Phi: phi = coords[a]; break;
    }
  }
  try {
    SystemParams p = make_params(mu, q1, a2, mb, tb);
    Vec2 pos;
    if (spec.fixed_point) {
      pos = *spec.fixed_point;
    } else if (spec.resolve_point) {
      LagrangePoint pt = spec.point <= PointIndex::L3 ? solve_collinear(p, spec.point)
                                                      : solve_triangular(p, spec.point);
      pos = {pt.x, pt.y};
    } else {
      LagrangePoint pt = spec.point <= PointIndex::L3
                             ? solve_collinear(spec.base, spec.point)
                             : solve_triangular(spec.base, spec.point);
      pos = {pt.x, pt.y};
    }
    cell.verdict = classify(p, pos, make_perturbation(eps, phi), spec.integrator);
  } catch (const std::exception& e) {
    cell.verdict = StabilityVerdict{};
    cell.verdict.perturbation = {eps, phi};
    cell.verdict.bounded = false;
    cell.verdict.error = e.what();
  }
  return cell;
}

}  // namespace

std::vector<SweepCell> sweep_params(const SweepSpec& spec) {
  if (spec.axes.empty() || spec.axes.size() > 2)
    throw param_error("a sweep takes one or two axes");
  for (const auto& ax : spec.axes) {
    if (ax.count < 1) throw param_error("axis count must be at least 1");
    if (!std::isfinite(ax.min) || !std::isfinite(ax.max) || ax.min > ax.max)
      throw param_error("axis range must be finite with min <= max");
  }
  if (spec.axes.size() == 2 && spec.axes[0].field == spec.axes[1].field)
    throw param_error("sweep axes must differ");

  std::vector<std::vector<double>> grids;
  for (const auto& ax : spec.axes) {
    std::vector<double> g(ax.count);
    for (int i = 0; i < ax.count; ++i) g[i] = axis_value(ax, i);
    grids.push_back(std::move(g));
  }

  std::vector<std::vector<double>> coords;
  if (grids.size() == 1) {
    for (double v : grids[0]) coords.push_back({v});
  } else {
    for (double u : grids[0])
      for (double v : grids[1]) coords.push_back({u, v});
  }

  // Fixed-point mode resolves once up front so every cell shares the release
  // point; a resolution failure then aborts the whole sweep, which is the
  // honest outcome.
  SweepSpec local = spec;
  if (!local.fixed_point && !local.resolve_point) {
    LagrangePoint pt = local.point <= PointIndex::L3
                           ? solve_collinear(local.base, local.point)
                           : solve_triangular(local.base, local.point);
    local.fixed_point = Vec2{pt.x, pt.y};
  }

  std::vector<SweepCell> cells(coords.size());
  unsigned jobs = local.jobs > 0 ? static_cast<unsigned>(local.jobs)
                                 : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, coords.size());
  if (jobs <= 1) {
    for (size_t i = 0; i < coords.size(); ++i) cells[i] = run_cell(local, coords[i]);
    return cells;
  }

  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= coords.size()) return;
      cells[i] = run_cell(local, coords[i]);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return cells;
}

}  // namespace chermnykh
