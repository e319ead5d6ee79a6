#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cell_problem.hpp"
#include "energies.hpp"
#include "field.hpp"
#include "mat2.hpp"
#include "rng.hpp"

using namespace polyhom;

TEST_CASE("discrete energy of exact laminates vanishes at the matched scale") {
  using namespace counterexample;
  const CellEnergy ce = composite_cell_energy(4.0);

  // Each compatible generator pair produces a zero-energy laminate when the
  // energy is evaluated at the laminate's own scale.
  const DisplacementField f1 = laminate_field(phase1_a(), phase2_a(), 4, 16, 1);
  CHECK(discrete_energy(ce, f1, 4) == 0.0);
  const DisplacementField f2 = laminate_field(phase1_b(), phase2_b(), 4, 16, 1);
  CHECK(discrete_energy(ce, f2, 4) == 0.0);

  // At a mismatched scale the phases disagree with the gradients somewhere.
  CHECK(discrete_energy(ce, f1, 2) > 1e-3);

  // The gradient vanishes along with the energy (global minimum).
  const std::vector<double> g = discrete_energy_gradient(ce, f1, 4);
  for (const double v : g) CHECK(v == 0.0);
}

TEST_CASE("discrete energy of constant fields") {
  const CellEnergy ce = composite_cell_energy(4.0);

  // Zero mean gradient lies in both zero sets: zero energy.
  const DisplacementField f0(8, 1, counterexample::zero_mat());
  CHECK(discrete_energy(ce, f0, 1) == 0.0);

  // The first-phase generator pays only in the second-phase half cell.
  const DisplacementField fa(8, 1, counterexample::phase1_a());
  const auto& e2 = *ce.phases[1];
  const double expect = 0.5 * e2.value(counterexample::phase1_a());
  CHECK(discrete_energy(ce, fa, 1) == doctest::Approx(expect).epsilon(1e-12));

  CHECK_THROWS_AS(discrete_energy(ce, f0, 0), std::invalid_argument);
}

TEST_CASE("fused evaluation matches the split calls bitwise") {
  const CellEnergy ce = composite_cell_energy(4.0);
  DisplacementField f(8, 1, counterexample::average_a());
  SplitMix64 rng(13);
  for (double& v : f.data()) v = rng.next_in(-0.05, 0.05);

  std::vector<double> fused_grad;
  const double fused = discrete_energy_with_gradient(ce, f, 1, fused_grad);
  CHECK(fused == discrete_energy(ce, f, 1));
  CHECK(fused_grad == discrete_energy_gradient(ce, f, 1));
}

TEST_CASE("discrete energy is deterministic across thread counts") {
  const CellEnergy ce = composite_cell_energy(4.0);
  DisplacementField f(16, 2, counterexample::average_b());
  SplitMix64 rng(29);
  for (double& v : f.data()) v = rng.next_in(-0.1, 0.1);

  const double e1 = discrete_energy(ce, f, 1, 1);
  const double e4 = discrete_energy(ce, f, 1, 4);
  CHECK(e1 == e4);
  const std::vector<double> g1 = discrete_energy_gradient(ce, f, 1, 1);
  const std::vector<double> g4 = discrete_energy_gradient(ce, f, 1, 4);
  CHECK(g1 == g4);
}

TEST_CASE("discrete energy gradient matches finite differences") {
  const CellEnergy ce = composite_cell_energy(4.0);
  SplitMix64 rng(41);
  for (const int N : {4, 6}) {
    DisplacementField f(N, 1, counterexample::average_a());
    for (double& v : f.data()) v = rng.next_in(-0.2, 0.2);

    std::vector<double> grad;
    discrete_energy_with_gradient(ce, f, 1, grad);
    const double h = 1e-6;
    double max_rel = 0.0;
    for (std::size_t d = 0; d < f.data().size(); ++d) {
      const double saved = f.data()[d];
      f.data()[d] = saved + h;
      const double ep = discrete_energy(ce, f, 1);
      f.data()[d] = saved - h;
      const double em = discrete_energy(ce, f, 1);
      f.data()[d] = saved;
      const double fd = (ep - em) / (2.0 * h);
      max_rel = std::max(max_rel,
                         std::fabs(fd - grad[d]) / std::max(1.0, std::fabs(fd)));
    }
    CHECK(max_rel <= 1e-4);
  }
}

TEST_CASE("cell problem at a shared zero needs no relaxation") {
  const CellEnergy ce = composite_cell_energy(4.0);
  const CellProblemResult r =
      cell_problem_minimize(ce, counterexample::zero_mat(), 8, 1);
  CHECK(r.converged);
  CHECK(r.estimate == 0.0);
  CHECK(r.iterations == 0);  // the zero field is already stationary
  CHECK(r.field.mean() == counterexample::zero_mat());
}

TEST_CASE("cell problem relaxes the averages to zero from a laminate start") {
  using namespace counterexample;
  const CellEnergy ce = composite_cell_energy(4.0);

  // average_a = (phase1_a + phase2_a) / 2: the matched laminate at the unit
  // scale is an exact minimizer, so the solve certifies zero immediately.
  const DisplacementField start = laminate_field(phase1_a(), phase2_a(), 1, 8, 1);
  const CellProblemResult r =
      cell_problem_minimize(ce, average_a(), 8, 1, {}, &start);
  CHECK(r.converged);
  CHECK(r.estimate <= 1e-12);
  CHECK(r.grad_norm <= 1e-9);
}

TEST_CASE("cell problem decreases the energy from a cold start") {
  const CellEnergy ce = composite_cell_energy(4.0);
  SolverOptions opts;
  opts.max_iterations = 300;
  const Mat2 A = counterexample::average_a();
  const double at_start = discrete_energy(ce, DisplacementField(8, 1, A), 1);
  const CellProblemResult r = cell_problem_minimize(ce, A, 8, 1, opts);
  CHECK(r.estimate < at_start);
  CHECK(r.estimate >= 0.0);
  CHECK(r.iterations <= 300);
}

TEST_CASE("both solver methods agree on the certified zeros") {
  using namespace counterexample;
  const CellEnergy ce = composite_cell_energy(4.0);
  for (const auto method :
       {SolverOptions::Method::GradientDescent, SolverOptions::Method::LBFGS}) {
    SolverOptions opts;
    opts.method = method;
    const DisplacementField start =
        laminate_field(phase1_b(), phase2_b(), 1, 8, 1);
    const CellProblemResult r =
        cell_problem_minimize(ce, average_b(), 8, 1, opts, &start);
    CHECK(r.converged);
    CHECK(r.estimate <= 1e-12);
  }
}

TEST_CASE("tiling a minimizer preserves the estimate across periods") {
  using namespace counterexample;
  const CellEnergy ce = composite_cell_energy(4.0);
  const DisplacementField start = laminate_field(phase1_a(), phase2_a(), 1, 8, 1);
  const CellProblemResult r1 =
      cell_problem_minimize(ce, average_a(), 8, 1, {}, &start);

  const DisplacementField tiled = tile_field(r1.field, 2);
  CHECK(discrete_energy(ce, tiled, 1) ==
        doctest::Approx(r1.estimate).epsilon(1e-12));

  // Warm-started k=2 solve can only improve on the k=1 estimate.
  const CellProblemResult r2 =
      cell_problem_minimize(ce, average_a(), 8, 2, {}, &tiled);
  CHECK(r2.estimate <= r1.estimate + 1e-15);
}

TEST_CASE("cell problem validates its inputs") {
  const CellEnergy ce = composite_cell_energy(4.0);
  CHECK_THROWS_AS(cell_problem_minimize(ce, Mat2{}, 7, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(cell_problem_minimize(ce, Mat2{}, 0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(cell_problem_minimize(ce, Mat2{}, 8, 0),
                  std::invalid_argument);

  // Initial fields must match the grid and the mean.
  const DisplacementField wrong_grid(4, 1, Mat2{});
  CHECK_THROWS_AS(cell_problem_minimize(ce, Mat2{}, 8, 1, {}, &wrong_grid),
                  std::invalid_argument);
  const DisplacementField wrong_mean(8, 1, diag(1.0, 0.0));
  CHECK_THROWS_AS(cell_problem_minimize(ce, Mat2{}, 8, 1, {}, &wrong_mean),
                  std::invalid_argument);
}
