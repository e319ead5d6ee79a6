#pragma once

#include <cstdint>
#include <vector>

#include "energies.hpp"
#include "field.hpp"

namespace polyhom {

struct SolverOptions {
  enum class Method { GradientDescent, LBFGS };

  int max_iterations = 100000;
  double grad_tol = 1e-9;     // stop when |gradient|_inf <= grad_tol
  double armijo_c = 1e-4;     // sufficient-decrease constant
  double backtrack = 0.5;     // step shrink factor
  Method method = Method::GradientDescent;
  int lbfgs_memory = 10;
  int threads = 1;
};

struct CellProblemResult {
  double estimate = 0.0;  // (1/k^2) * discrete energy at the final field
  DisplacementField field;
  int iterations = 0;
  bool converged = false;
  double grad_norm = 0.0;  // |gradient|_inf at the final field
};

// Mean energy (1/k^2) sum_T area(T) * ce(frac(centroid/eps), mean + grad w)
// of a field against the composite at microstructure scale eps = 1/eps_denom.
// eps_denom = 1 is the cell-problem integrand (phases at unit-cell scale).
double discrete_energy(const CellEnergy& ce, const DisplacementField& f,
                       int eps_denom, int threads = 1);

// Derivative of discrete_energy with respect to the nodal values, laid out
// like DisplacementField::data(). Deterministic for any thread count (each
// node gathers from its six incident triangles).
std::vector<double> discrete_energy_gradient(const CellEnergy& ce,
                                             const DisplacementField& f,
                                             int eps_denom, int threads = 1);

// Fused energy + gradient (one projection pass per triangle).
double discrete_energy_with_gradient(const CellEnergy& ce,
                                     const DisplacementField& f, int eps_denom,
                                     std::vector<double>& grad_out,
                                     int threads = 1);

// Quasiconvexification estimate at mean gradient A: first-order minimization
// of the unit-scale discrete energy over periodic nodal displacements on the
// (kN)^2 grid. Deterministic given the initial field (zero by default; a
// supplied initial field must match N, k, and have mean A). Requires N even
// so the phase boundary lies on grid lines.
CellProblemResult cell_problem_minimize(const CellEnergy& ce, const Mat2& A,
                                        int N, int k,
                                        const SolverOptions& opts = {},
                                        const DisplacementField* initial = nullptr);

}  // namespace polyhom
