#pragma once
#include <string>
#include <vector>

#include "chermnykh/config.hpp"

namespace chermnykh {

// Loads the config, runs the command, writes its output files into out_dir.
// Errors surface as the usual exception taxonomy; the CLI maps them to exit
// codes.
void run_command(Command cmd, const std::string& config_path,
                 const std::vector<std::string>& overrides, const std::string& out_dir, int jobs);

}  // namespace chermnykh
