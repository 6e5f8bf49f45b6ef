#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "chermnykh/commands.hpp"
#include "chermnykh/version.hpp"

namespace {

struct Opts {
  std::string config;
  std::vector<std::string> sets;
  std::string out = ".";
  int jobs = 0;  // all cores
};

void add_common(CLI::App* sub, Opts& o) {
  sub->add_option("--config", o.config, "config file (INI)")->required();
  sub->add_option("--set", o.sets, "override, section.key=value")->take_all();
  sub->add_option("--out", o.out, "output directory");
  sub->add_option("--jobs", o.jobs, "worker threads for sweeps (default: all cores)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"equilibria and stability lab for the perturbed rotating three-body frame"};
  app.set_version_flag("--version", chermnykh::k_version);
  app.require_subcommand(1);

  Opts o;
  auto* locate = app.add_subcommand("locate", "solve for the five equilibrium points");
  auto* trajectory = app.add_subcommand("trajectory", "integrate one rotating-frame trajectory");
  auto* perturb = app.add_subcommand("perturb", "classify the response to a point perturbation");
  auto* sweep = app.add_subcommand("sweep", "grid of perturbation verdicts over parameters");
  for (auto* sub : {locate, trajectory, perturb, sweep}) add_common(sub, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  chermnykh::Command cmd;
  if (locate->parsed())
    cmd = chermnykh::Command::Locate;
  else if (trajectory->parsed())
    cmd = chermnykh::Command::Trajectory;
  else if (perturb->parsed())
    cmd = chermnykh::Command::Perturb;
  else
    cmd = chermnykh::Command::Sweep;

  try {
    chermnykh::run_command(cmd, o.config, o.sets, o.out, o.jobs);
  } catch (const chermnykh::param_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const chermnykh::solver_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const chermnykh::integration_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
