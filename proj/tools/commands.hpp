#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace fclab::cli {

int cmd_assemble(const Config& cfg);
int cmd_forward(const Config& cfg);
int cmd_dtn(const Config& cfg);
int cmd_invert(const Config& cfg);
int cmd_study_contraction(const Config& cfg);
int cmd_study_linearize(const Config& cfg);
int cmd_study_runge(const Config& cfg);
int cmd_verify(const Config& cfg);

// Parses a command line (without the program name) and dispatches.  Returns
// 0 on success, 2 for usage or configuration errors, 3 for runtime failures.
int run_command(std::vector<std::string> args);

}  // namespace fclab::cli
