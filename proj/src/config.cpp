#include "chermnykh/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace chermnykh {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

using Entries = std::map<std::string, std::string>;  // "section.key" -> value

struct Schema {
  std::map<std::string, std::vector<std::string>> sections = {
      {"params", {"preset", "mu", "q1", "a2", "mb", "t_belt"}},
      {"integrator",
       {"rel_tol", "abs_tol", "max_step", "t_end", "escape_radius", "sample_interval"}},
      {"run", {"point", "epsilon", "phi", "phi_unit", "x0", "y0", "vx0", "vy0"}},
      {"sweep",
       {"axis1", "axis1_min", "axis1_max", "axis1_count", "axis2", "axis2_min", "axis2_max",
        "axis2_count", "resolve_point", "point_x", "point_y"}},
  };

  void check(const std::string& section, const std::string& key) const {
    auto it = sections.find(section);
    if (it == sections.end()) throw param_error("unknown config section [" + section + "]");
    for (const auto& k : it->second)
      if (k == key) return;
    throw param_error("unknown config key " + section + "." + key);
  }
};

Entries parse_ini(const std::string& text, const Schema& schema) {
  Entries entries;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t c = line.find_first_of("#;");
    if (c != std::string::npos) line.erase(c);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw param_error("config line " + std::to_string(lineno) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (schema.sections.find(section) == schema.sections.end())
        throw param_error("unknown config section [" + section + "]");
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw param_error("config line " + std::to_string(lineno) + ": expected key=value");
    if (section.empty())
      throw param_error("config line " + std::to_string(lineno) + ": key outside any section");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw param_error("config line " + std::to_string(lineno) + ": empty key");
    schema.check(section, key);
    entries[section + "." + key] = val;
  }
  return entries;
}

void apply_override(Entries& entries, const std::string& ov, const Schema& schema) {
  size_t eq = ov.find('=');
  if (eq == std::string::npos) throw param_error("override '" + ov + "' must be section.key=value");
  std::string lhs = trim(ov.substr(0, eq));
  std::string val = trim(ov.substr(eq + 1));
  size_t dot = lhs.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == lhs.size())
    throw param_error("override '" + ov + "' must be section.key=value");
  std::string section = lhs.substr(0, dot);
  std::string key = lhs.substr(dot + 1);
  schema.check(section, key);
  entries[section + "." + key] = val;
}

struct Reader {
  const Entries& entries;

  bool has(const std::string& k) const { return entries.count(k) != 0; }

  std::string str(const std::string& k) const { return entries.at(k); }

  double number(const std::string& k) const {
    const std::string& v = entries.at(k);
    char* end = nullptr;
    double d = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0' || !std::isfinite(d))
      throw param_error(k + " = '" + v + "' is not a finite number");
    return d;
  }

  double number_or(const std::string& k, double dflt) const {
    return has(k) ? number(k) : dflt;
  }

  int integer(const std::string& k) const {
    const std::string& v = entries.at(k);
    char* end = nullptr;
    long n = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
      throw param_error(k + " = '" + v + "' is not an integer");
    return static_cast<int>(n);
  }

  bool boolean(const std::string& k) const {
    const std::string& v = entries.at(k);
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw param_error(k + " = '" + v + "' is not a boolean (true/false)");
  }
};

PointIndex parse_point(const std::string& s) {
  if (s == "L1") return PointIndex::L1;
  if (s == "L2") return PointIndex::L2;
  if (s == "L3") return PointIndex::L3;
  if (s == "L4") return PointIndex::L4;
  if (s == "L5") return PointIndex::L5;
  throw param_error("run.point = '" + s + "' is not one of L1..L5");
}

SweepField parse_field(const std::string& key, const std::string& s) {
  if (s == "q1") return SweepField::Q1;
  if (s == "a2") return SweepField::A2;
  if (s == "mb") return SweepField::Mb;
  if (s == "epsilon") return SweepField::Epsilon;
  if (s == "phi") return SweepField::Phi;
  throw param_error(key + " = '" + s + "' is not one of q1, a2, mb, epsilon, phi");
}

SweepAxis parse_axis(const Reader& r, const std::string& prefix) {
  for (const char* suffix : {"_min", "_max", "_count"})
    if (!r.has(prefix + suffix)) throw param_error(prefix + suffix + " is required");
  SweepAxis ax;
  ax.field = parse_field(prefix, r.str(prefix));
  ax.min = r.number(prefix + "_min");
  ax.max = r.number(prefix + "_max");
  ax.count = r.integer(prefix + "_count");
  if (ax.count < 1) throw param_error(prefix + "_count must be at least 1");
  if (ax.min > ax.max) throw param_error(prefix + "_min must not exceed " + prefix + "_max");
  return ax;
}

}  // namespace

const char* command_name(Command c) {
  switch (c) {
    case Command::Locate: return "locate";
    case Command::Trajectory: return "trajectory";
    case Command::Perturb: return "perturb";
    case Command::Sweep: return "sweep";
  }
  return "?";
}

RunConfig load_config(Command cmd, const std::string& path,
                      const std::vector<std::string>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw param_error("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();

  Schema schema;
  RunConfig rc;
  rc.command = cmd;
  rc.config_path = path;
  rc.overrides = overrides;
  rc.raw_text = buf.str();

  Entries entries = parse_ini(rc.raw_text, schema);
  for (const auto& ov : overrides) apply_override(entries, ov, schema);
  Reader r{entries};

  bool has_preset = r.has("params.preset");
  bool has_mu = r.has("params.mu");
  if (has_preset && has_mu) throw param_error("give params.preset or params.mu, not both");
  if (!has_preset && !has_mu) throw param_error("one of params.preset or params.mu is required");
  double mu;
  if (has_preset) {
    std::string preset = r.str("params.preset");
    if (preset == "sun-earth")
      mu = mu_sun_earth;
    else if (preset == "sun-jupiter")
      mu = mu_sun_jupiter;
    else
      throw param_error("params.preset = '" + preset + "' is not sun-earth or sun-jupiter");
    rc.resolved["params.preset"] = preset;
  } else {
    mu = r.number("params.mu");
  }
  rc.params = make_params(mu, r.number_or("params.q1", 1.0), r.number_or("params.a2", 0.0),
                          r.number_or("params.mb", 0.0), r.number_or("params.t_belt", 0.01));
  rc.resolved["params.mu"] = fmt17(rc.params.mu);
  rc.resolved["params.q1"] = fmt17(rc.params.q1);
  rc.resolved["params.a2"] = fmt17(rc.params.a2);
  rc.resolved["params.mb"] = fmt17(rc.params.mb);
  rc.resolved["params.t_belt"] = fmt17(rc.params.t_belt);

  IntegratorConfig defaults;
  rc.integrator.rel_tol = r.number_or("integrator.rel_tol", defaults.rel_tol);
  rc.integrator.abs_tol = r.number_or("integrator.abs_tol", defaults.abs_tol);
  rc.integrator.max_step = r.number_or("integrator.max_step", defaults.max_step);
  rc.integrator.escape_radius = r.number_or("integrator.escape_radius", defaults.escape_radius);
  rc.integrator.sample_interval =
      r.number_or("integrator.sample_interval", defaults.sample_interval);
  rc.integrator.t_end = r.number_or("integrator.t_end", 0.0);
  if (cmd != Command::Locate) {
    if (!r.has("integrator.t_end")) throw param_error("integrator.t_end is required");
    if (rc.integrator.t_end <= 0.0) throw param_error("integrator.t_end must be positive");
    rc.resolved["integrator.t_end"] = fmt17(rc.integrator.t_end);
    rc.resolved["integrator.sample_interval"] = fmt17(rc.integrator.sample_interval);
    rc.resolved["integrator.rel_tol"] = fmt17(rc.integrator.rel_tol);
    rc.resolved["integrator.abs_tol"] = fmt17(rc.integrator.abs_tol);
    rc.resolved["integrator.max_step"] = fmt17(rc.integrator.max_step);
    rc.resolved["integrator.escape_radius"] = fmt17(rc.integrator.escape_radius);
  }

  rc.point = r.has("run.point") ? parse_point(r.str("run.point")) : PointIndex::L1;
  double phi = r.number_or("run.phi", 0.0);
  if (r.has("run.phi_unit")) {
    std::string u = r.str("run.phi_unit");
    if (u == "deg")
      phi = phi / 180.0 * M_PI;
    else if (u != "rad")
      throw param_error("run.phi_unit = '" + u + "' is not rad or deg");
  }
  rc.pert = make_perturbation(r.number_or("run.epsilon", 0.0), phi);
  if (cmd != Command::Locate) {
    rc.resolved["run.point"] = point_name(rc.point);
    rc.resolved["run.epsilon"] = fmt17(rc.pert.epsilon);
    rc.resolved["run.phi"] = fmt17(rc.pert.phi);
  }

  bool any_state = false, all_state = true;
  for (const char* k : {"run.x0", "run.y0", "run.vx0", "run.vy0"}) {
    if (r.has(k))
      any_state = true;
    else
      all_state = false;
  }
  if (any_state) {
    if (cmd != Command::Trajectory)
      throw param_error("run.x0/y0/vx0/vy0 apply to the trajectory command only");
    if (!all_state) throw param_error("run.x0, y0, vx0, vy0 must be given together");
    rc.explicit_state =
        State{0.0, r.number("run.x0"), r.number("run.y0"), r.number("run.vx0"),
              r.number("run.vy0")};
    for (const char* k : {"run.x0", "run.y0", "run.vx0", "run.vy0"})
      rc.resolved[k] = fmt17(r.number(k));
  }

  if (cmd == Command::Sweep) {
    if (!r.has("sweep.axis1")) throw param_error("sweep.axis1 is required");
    SweepSpec spec;
    spec.axes.push_back(parse_axis(r, "sweep.axis1"));
    if (r.has("sweep.axis2")) {
      spec.axes.push_back(parse_axis(r, "sweep.axis2"));
      if (spec.axes[0].field == spec.axes[1].field)
        throw param_error("sweep.axis2 must differ from sweep.axis1");
    }
    spec.base = rc.params;
    spec.pert = rc.pert;
    spec.integrator = rc.integrator;
    spec.point = rc.point;
    spec.resolve_point = r.has("sweep.resolve_point") ? r.boolean("sweep.resolve_point") : true;
    bool has_px = r.has("sweep.point_x"), has_py = r.has("sweep.point_y");
    if (has_px != has_py)
      throw param_error("sweep.point_x and sweep.point_y must be given together");
    if (has_px) spec.fixed_point = Vec2{r.number("sweep.point_x"), r.number("sweep.point_y")};
    rc.sweep = spec;
    for (size_t a = 0; a < spec.axes.size(); ++a) {
      std::string pre = "sweep.axis" + std::to_string(a + 1);
      rc.resolved[pre] = sweep_field_name(spec.axes[a].field);
      rc.resolved[pre + "_min"] = fmt17(spec.axes[a].min);
      rc.resolved[pre + "_max"] = fmt17(spec.axes[a].max);
      rc.resolved[pre + "_count"] = std::to_string(spec.axes[a].count);
    }
    rc.resolved["sweep.resolve_point"] = spec.resolve_point ? "true" : "false";
    if (spec.fixed_point) {
      rc.resolved["sweep.point_x"] = fmt17(spec.fixed_point->x);
      rc.resolved["sweep.point_y"] = fmt17(spec.fixed_point->y);
    }
  }

  return rc;
}

}  // namespace chermnykh
