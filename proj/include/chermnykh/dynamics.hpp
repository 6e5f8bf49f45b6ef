#pragma once
#include <vector>

#include "chermnykh/model.hpp"

namespace chermnykh {

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.01;
  double t_end = 0.0;
  double escape_radius = 0.1;    // displacement from the start that counts as escape
  double sample_interval = 0.0;  // 0: t_end / 2000
};

enum class Termination { Completed, Escaped, SingularityHit, StepUnderflow };
const char* termination_name(Termination t);

struct Deriv {
  double dx, dy, dvx, dvy;
};

// Rotating-frame equations of motion:
//   x'' - 2n y' = Omega_x,  y'' + 2n x' = Omega_y
Deriv rhs(const SystemParams& p, const State& s);

struct Sample {
  State s;
  double e;        // Jacobi energy at the sample
  double r_local;  // displacement from the initial position
};

struct Trajectory {
  std::vector<Sample> samples;
  Termination termination;
  double t_event;       // event epoch; equals the end time when Completed
  double energy_drift;  // max |E - E(0)| over the samples
};

// Adaptive embedded 5(4) pair with PI step control. Samples land on the uniform
// grid t0 + k * sample_interval plus one final sample exactly at the end or at
// the event epoch. Escape and close-approach events are located on the dense
// output to 1e-9 in time; the earlier one wins.
Trajectory integrate(const SystemParams& p, const State& initial, const IntegratorConfig& cfg);

}  // namespace chermnykh
