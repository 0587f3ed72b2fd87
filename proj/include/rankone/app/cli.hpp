#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rankone/app/config.hpp"
#include "rankone/app/output.hpp"

namespace rankone::app {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitConfig = 2, kExitBudget = 3 };

// Validates `config` (may fill in seeds), runs the operation and writes its outputs.
RunRecord run(ExperimentConfig& config);
// Writes the record per config.format and config.out; stdout receives whatever has no file.
void emit(const RunRecord& record, const ExperimentConfig& config, std::ostream& out);

// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace rankone::app
