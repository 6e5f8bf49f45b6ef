#pragma once
#include <stdexcept>

namespace chermnykh {

// Error taxonomy mirrors the CLI exit codes: parameter/config problems exit 2,
// equilibrium-solver failures exit 3, integration failures exit 4.
struct param_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct solver_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct integration_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct singularity_error : integration_error {
  using integration_error::integration_error;
};

}  // namespace chermnykh
