#pragma once

#include <string>

#include "config.hpp"

namespace polyhom {

// Outcome of one command run: files are written under the chosen output
// directory (byte-identical for identical config and seed); text is the
// human-readable report for stdout and is the only place wall times appear.
struct CommandResult {
  int exit_code = 0;  // 0 ok, 3 numerical non-reproduction / solver flag
  std::string text;
};

// Hull verdicts for the three reference sets, arc membership residuals, and
// arc plot data. Writes sets.csv, arc_membership.csv, arc_plot.csv,
// summary.json.
CommandResult run_hulls(const RunConfig& cfg, const std::string& out_dir);

// Membership verdicts for O, B1, B2 and the configured arc samples against
// the selected composite; the final text line states whether the
// loss-of-polyconvexity conclusion is reproduced (exit 3 when it is not).
// Writes verdicts.csv, summary.json.
CommandResult run_counterexample(const RunConfig& cfg,
                                 const std::string& out_dir);

// Homogenized-energy estimates at the configured matrix over the (N, k)
// grid, warm-starting each k from the previous minimizer tiled. Writes
// estimates.csv, minimizer_N<...>_k<...>.txt, summary.json. Exit 3 when a
// solve fails to converge.
CommandResult run_homogenize(const RunConfig& cfg, const std::string& out_dir);

// Riemann-Lebesgue error table plus support checks for an exact laminate and
// its corrupted copy. Writes rl_errors.csv, support.csv, summary.json.
CommandResult run_two_scale(const RunConfig& cfg, const std::string& out_dir);

// Dispatch by command name ("hulls", "counterexample", "homogenize",
// "two-scale"); unknown names raise config_error.
CommandResult run_command(const std::string& command, const RunConfig& cfg,
                          const std::string& out_dir);

}  // namespace polyhom
