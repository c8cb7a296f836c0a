#pragma once

#include <string>
#include <vector>

#include "jsgraph/domain.hpp"

namespace jsgraph {

/// Exit codes shared by the library pipeline and the CLI.
enum ExitCode {
  kExitPass = 0,
  kExitCheckFail = 1,
  kExitNoConvergence = 2,
  kExitInputError = 3,
  kExitInternal = 4,
};

struct RunConfig {
  std::string command;
  std::string domain_path;
  std::string mesh_path;      // optional external mesh (solve/js/analyze)
  std::string solution_path;  // analyze
  std::string mode = "minimal";  // minimal | cmc | translating
  double H = 1.0;
  double c = 1.0;
  double cap = 1.0;
  std::vector<double> caps;   // js schedule; empty = 1,2,4,...,16
  double h = 0.1;
  double grading = 1.0;
  double tol = 1e-10;
  unsigned seed = 0;
  int trials = 50;
  std::string out_dir;
  std::string format = "json";
  bool override_check = false;
};

struct RunOutcome {
  int exit_code = kExitPass;
  std::string report;              // JSON (or CSV for oracle) printed on stdout
  std::vector<std::string> files;  // files written under out_dir
};

RunOutcome run_check(const RunConfig& cfg);
RunOutcome run_mesh(const RunConfig& cfg);
RunOutcome run_solve(const RunConfig& cfg);
RunOutcome run_js(const RunConfig& cfg);
RunOutcome run_analyze(const RunConfig& cfg);
RunOutcome run_oracle(const RunConfig& cfg);

/// Dispatch on cfg.command with exceptions mapped to exit codes.
RunOutcome run(const RunConfig& cfg);

}  // namespace jsgraph
