#include "chermnykh/commands.hpp"

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <thread>

#include "chermnykh/output.hpp"
#include "chermnykh/version.hpp"

namespace fs = std::filesystem;

namespace chermnykh {

namespace {

std::string out_path(const std::string& dir, const char* name) {
  return (fs::path(dir) / name).string();
}

std::string input_hash(const RunConfig& rc) {
  uint64_t h = fnv1a64(rc.raw_text);
  for (const auto& ov : rc.overrides) h = fnv1a64(std::string(1, '\x1f') + ov, h);
  return hash_hex(h);
}

void write_manifest(const RunConfig& rc, const std::string& dir, int jobs) {
  JsonWriter w;
  w.begin_object();
  w.key("command").value(command_name(rc.command));
  w.key("version").value(k_version);
  w.key("input_hash").value(input_hash(rc));
  w.key("config").begin_object();
  for (const auto& [k, v] : rc.resolved) w.key(k).value(v);
  w.end_object();
  w.key("overrides").begin_array();
  for (const auto& ov : rc.overrides) w.value(ov);
  w.end_array();
  w.key("jobs").value(jobs);
  w.end_object();
  atomic_write(out_path(dir, "manifest.json"), w.take() + "\n");
}

LagrangePoint locate_point(const SystemParams& p, PointIndex idx) {
  return idx <= PointIndex::L3 ? solve_collinear(p, idx) : solve_triangular(p, idx);
}

std::string samples_csv(const Trajectory& tr) {
  std::string csv = "t,x,y,vx,vy,E,r_local\n";
  for (const auto& s : tr.samples) {
    csv += format_double(s.s.t);
    csv += ',';
    csv += format_double(s.s.x);
    csv += ',';
    csv += format_double(s.s.y);
    csv += ',';
    csv += format_double(s.s.vx);
    csv += ',';
    csv += format_double(s.s.vy);
    csv += ',';
    csv += format_double(s.e);
    csv += ',';
    csv += format_double(s.r_local);
    csv += '\n';
  }
  return csv;
}

void write_summary(const Trajectory& tr, const IntegratorConfig& cfg, const std::string& dir) {
  double max_r = 0.0;
  for (const auto& s : tr.samples) max_r = std::max(max_r, s.r_local);
  JsonWriter w;
  w.begin_object();
  w.key("termination").value(termination_name(tr.termination));
  w.key("t_end").value(cfg.t_end);
  w.key("t_escape");
  if (tr.termination == Termination::Completed)
    w.null();
  else
    w.value(tr.t_event);
  w.key("n_samples").value(static_cast<long>(tr.samples.size()));
  w.key("energy_drift").value(tr.energy_drift);
  w.key("e_initial").value(tr.samples.front().e);
  w.key("e_final").value(tr.samples.back().e);
  w.key("max_r_local").value(max_r);
  w.end_object();
  atomic_write(out_path(dir, "summary.json"), w.take() + "\n");
}

void cmd_locate(const RunConfig& rc, const std::string& dir) {
  auto points = locate_all(rc.params);

  JsonWriter w;
  w.begin_object();
  w.key("params").begin_object();
  w.key("mu").value(rc.params.mu);
  w.key("q1").value(rc.params.q1);
  w.key("a2").value(rc.params.a2);
  w.key("mb").value(rc.params.mb);
  w.key("t_belt").value(rc.params.t_belt);
  w.key("n").value(rc.params.n);
  w.key("rc").value(rc.params.rc);
  w.end_object();
  w.key("points").begin_array();
  for (const auto& pt : points) {
    w.begin_object();
    w.key("name").value(point_name(pt.index));
    w.key("x").value(pt.x);
    w.key("y").value(pt.y);
    w.key("residual").value(pt.residual);
    w.key("iterations").value(pt.iterations);
    w.key("multiple_roots").value(pt.multiple_roots);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  atomic_write(out_path(dir, "points.json"), w.take() + "\n");

  bool bold = isatty(fileno(stdout)) && std::getenv("NO_COLOR") == nullptr;
  std::printf("%s%-6s %24s %24s %10s %6s%s\n", bold ? "\x1b[1m" : "", "point", "x", "y",
              "residual", "iters", bold ? "\x1b[0m" : "");
  for (const auto& pt : points) {
    std::printf("%-6s %24s %24s %10.2e %6d%s\n", point_name(pt.index), format_double(pt.x).c_str(),
                format_double(pt.y).c_str(), pt.residual, pt.iterations,
                pt.multiple_roots ? "  (multiple axis roots)" : "");
  }
}

void cmd_trajectory(const RunConfig& rc, const std::string& dir) {
  State s0;
  if (rc.explicit_state) {
    s0 = *rc.explicit_state;
  } else {
    LagrangePoint pt = locate_point(rc.params, rc.point);
    s0 = perturb_ic({pt.x, pt.y}, rc.pert);
  }
  Trajectory tr = integrate(rc.params, s0, rc.integrator);
  atomic_write(out_path(dir, "samples.csv"), samples_csv(tr));
  write_summary(tr, rc.integrator, dir);
}

void cmd_perturb(const RunConfig& rc, const std::string& dir) {
  LagrangePoint pt = locate_point(rc.params, rc.point);
  Trajectory tr = integrate(rc.params, perturb_ic({pt.x, pt.y}, rc.pert), rc.integrator);
  StabilityVerdict v = summarize(tr, rc.pert);

  atomic_write(out_path(dir, "samples.csv"), samples_csv(tr));

  JsonWriter w;
  w.begin_object();
  w.key("point").begin_object();
  w.key("name").value(point_name(pt.index));
  w.key("x").value(pt.x);
  w.key("y").value(pt.y);
  w.end_object();
  w.key("epsilon").value(v.perturbation.epsilon);
  w.key("phi").value(v.perturbation.phi);
  w.key("bounded").value(v.bounded);
  w.key("t_escape");
  if (v.t_escape)
    w.value(*v.t_escape);
  else
    w.null();
  w.key("max_displacement").value(v.max_displacement);
  w.key("energy_drift").value(v.energy_drift);
  w.key("termination").value(termination_name(v.termination));
  w.end_object();
  atomic_write(out_path(dir, "verdict.json"), w.take() + "\n");
}

std::string scrub(std::string msg) {
  for (char& c : msg)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return msg;
}

void cmd_sweep(const RunConfig& rc, const std::string& dir, int jobs) {
  SweepSpec spec = *rc.sweep;
  spec.jobs = jobs;
  auto cells = sweep_params(spec);

  std::string csv;
  for (const auto& ax : spec.axes) {
    csv += sweep_field_name(ax.field);
    csv += ',';
  }
  csv += "bounded,t_escape,max_displacement,energy_drift,error\n";
  long bounded = 0, escaped = 0, errors = 0;
  for (const auto& cell : cells) {
    for (double c : cell.coords) {
      csv += format_double(c);
      csv += ',';
    }
    const auto& v = cell.verdict;
    if (!v.error.empty()) {
      ++errors;
      csv += "0,,,,";
      csv += scrub(v.error);
    } else {
      bounded += v.bounded;
      escaped += !v.bounded;
      csv += v.bounded ? "1," : "0,";
      if (v.t_escape) csv += format_double(*v.t_escape);
      csv += ',';
      csv += format_double(v.max_displacement);
      csv += ',';
      csv += format_double(v.energy_drift);
      csv += ',';
    }
    csv += '\n';
  }
  atomic_write(out_path(dir, "sweep.csv"), csv);

  JsonWriter w;
  w.begin_object();
  w.key("cells").value(static_cast<long>(cells.size()));
  w.key("bounded").value(bounded);
  w.key("escaped").value(escaped);
  w.key("errors").value(errors);
  w.key("axes").begin_array();
  for (const auto& ax : spec.axes) {
    w.begin_object();
    w.key("field").value(sweep_field_name(ax.field));
    w.key("min").value(ax.min);
    w.key("max").value(ax.max);
    w.key("count").value(ax.count);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  atomic_write(out_path(dir, "sweep_summary.json"), w.take() + "\n");
}

}  // namespace

void run_command(Command cmd, const std::string& config_path,
                 const std::vector<std::string>& overrides, const std::string& out_dir, int jobs) {
  RunConfig rc = load_config(cmd, config_path, overrides);
  int effective_jobs = jobs;
  if (cmd == Command::Sweep && jobs <= 0)
    effective_jobs = std::max(1u, std::thread::hardware_concurrency());
  switch (cmd) {
    case Command::Locate: cmd_locate(rc, out_dir); break;
    case Command::Trajectory: cmd_trajectory(rc, out_dir); break;
    case Command::Perturb: cmd_perturb(rc, out_dir); break;
    case Command::Sweep: cmd_sweep(rc, out_dir, effective_jobs); break;
  }
  write_manifest(rc, out_dir, effective_jobs);
}

}  // namespace chermnykh
