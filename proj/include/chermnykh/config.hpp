#pragma once
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chermnykh/stability.hpp"

namespace chermnykh {

enum class Command { Locate, Trajectory, Perturb, Sweep };
const char* command_name(Command c);

struct RunConfig {
  Command command;
  SystemParams params;
  IntegratorConfig integrator;
  PointIndex point = PointIndex::L1;
  Perturbation pert{0.0, 0.0};
  std::optional<State> explicit_state;  // [run] x0/y0/vx0/vy0, trajectory only
  std::optional<SweepSpec> sweep;
  std::string config_path;
  std::vector<std::string> overrides;
  std::string raw_text;  // config file bytes, hashed into the manifest
  std::map<std::string, std::string> resolved;  // effective values, section.key form
};

// Parses an INI config ([section], key=value, # or ; comments), applies
// --set section.key=value overrides, validates strictly (unknown sections or
// keys are errors), and resolves everything the command needs.
RunConfig load_config(Command cmd, const std::string& path,
                      const std::vector<std::string>& overrides);

}  // namespace chermnykh
