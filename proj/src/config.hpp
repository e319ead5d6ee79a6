#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cell_problem.hpp"
#include "energies.hpp"
#include "mat2.hpp"
#include "measure.hpp"

namespace polyhom {

// Raised for any malformed run configuration (file, key, or value); mapped to
// exit code 2 by the command-line tool.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key=value run configuration shared by all commands. Every key has a
// default, so an empty document is valid.
struct RunConfig {
  double p = 4.0;  // growth exponent of the phase energies

  // Cell-problem grid for membership certification and the solver fallback.
  int N = 16;
  int k = 1;

  // Homogenize command: table over these grids, warm-started in k.
  std::vector<int> n_list = {16, 32};
  std::vector<int> k_list = {1, 2};

  // Scale sweep (eps = 1/m) for the Riemann-Lebesgue table.
  std::vector<int> eps_denoms = {2, 4, 8, 16};

  // Arc parameters sampled by the hulls and counterexample commands.
  std::vector<double> t_samples = {0.1, 0.2, 0.3, 0.4, 0.5,
                                   0.6, 0.7, 0.8, 0.9};

  double zero_tol = 1e-8;      // membership certification threshold
  double residual_tol = 1e-9;  // hull membership residual threshold
  double support_tol = 1e-6;   // support check distance/mass threshold

  std::uint64_t seed = 0;
  int threads = 1;

  // Target matrix for the homogenize command (see parse_matrix_spec).
  std::string matrix_a = "b_arc:0.5";

  // Two-scale histogram resolution.
  int y_bins = 10;
  LambdaBinSpec lambda_bins;

  // Support-check section: laminate scale and corruption parameters.
  int support_eps_denom = 4;
  double corrupt_fraction = 0.01;
  double corrupt_magnitude = 1.0;

  // Solver controls.
  int max_iterations = 100000;
  double grad_tol = 1e-9;
  std::string method = "gd";  // "gd" or "lbfgs"

  std::string variant = "standard";  // or "convex-phase2"

  // Riemann-Lebesgue rectangles (x1lo,x1hi,x2lo,x2hi inside the unit square).
  Rect rl_u{0.0, 0.7, 0.0, 1.0};
  Rect rl_v{0.0, 0.5, 0.0, 1.0};
};

// Parses `key = value` lines; '#' starts a comment, blank lines are skipped.
// Unknown keys and unparsable values raise config_error.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Matrix spec: "O", "B1", "B2", "b_arc:<t>", or four comma-separated entries
// "a11,a12,a21,a22". Raises config_error otherwise.
Mat2 parse_matrix_spec(const std::string& spec);

SolverOptions solver_options(const RunConfig& cfg);

// The composite selected by cfg.variant, at exponent cfg.p.
CellEnergy composite_for_variant(const RunConfig& cfg);

}  // namespace polyhom
