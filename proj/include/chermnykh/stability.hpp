#pragma once
#include <optional>
#include <string>
#include <vector>

#include "chermnykh/dynamics.hpp"
#include "chermnykh/equilibria.hpp"

namespace chermnykh {

struct Perturbation {
  double epsilon;
  double phi;  // radians in [0, 2*pi)
};

// Validates epsilon in [0, 1) and wraps phi into [0, 2*pi).
Perturbation make_perturbation(double epsilon, double phi);

// Initial condition displaced from `position` by epsilon along direction phi,
// released at rest in the rotating frame.
State perturb_ic(Vec2 position, const Perturbation& pert);

struct StabilityVerdict {
  Perturbation perturbation;
  bool bounded;
  std::optional<double> t_escape;  // event epoch when not bounded
  double max_displacement;         // peak distance from the release point
  double energy_drift;
  Termination termination;
  std::string error;  // nonempty when a sweep cell failed instead of classifying
};

// Verdict fields of an already-integrated trajectory.
StabilityVerdict summarize(const Trajectory& tr, const Perturbation& pert);

StabilityVerdict classify(const SystemParams& p, Vec2 position, const Perturbation& pert,
                          const IntegratorConfig& cfg);

// Verdicts for phi = 2*pi*k/n_phi, k = 0..n_phi-1, at fixed epsilon. A cell
// that throws is reported through its error field rather than aborting the
// scan.
std::vector<StabilityVerdict> sweep_direction(const SystemParams& p, Vec2 position, double epsilon,
                                              int n_phi, const IntegratorConfig& cfg);

enum class SweepField { Q1, A2, Mb, Epsilon, Phi };
const char* sweep_field_name(SweepField f);

struct SweepAxis {
  SweepField field;
  double min, max;
  int count;
};

struct SweepSpec {
  std::vector<SweepAxis> axes;  // one or two
  SystemParams base;
  Perturbation pert;
  IntegratorConfig integrator;
  PointIndex point = PointIndex::L1;
  bool resolve_point = true;          // relocate the point for each cell's parameters
  std::optional<Vec2> fixed_point;    // explicit release point, overrides resolution
  int jobs = 1;                       // <= 0: hardware concurrency
};

struct SweepCell {
  std::vector<double> coords;  // axis values, one per axis
  StabilityVerdict verdict;
};

// Grid in lexicographic order (first axis outermost, values ascending). Cells
// are computed independently, so results are identical for any job count.
std::vector<SweepCell> sweep_params(const SweepSpec& spec);

}  // namespace chermnykh
