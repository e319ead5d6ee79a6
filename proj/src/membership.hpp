#pragma once

#include <optional>

#include "cell_problem.hpp"
#include "energies.hpp"
#include "field.hpp"
#include "mat2.hpp"

namespace polyhom {

enum class MembershipTag { CertifiedMember, ExcludedBySverak, Unknown };
const char* to_string(MembershipTag t);

// How a verdict was reached.
enum class CertificateRoute { None, Exclusion, ConstantField, Laminate, Solver };
const char* to_string(CertificateRoute r);

struct MembershipVerdict {
  MembershipTag tag = MembershipTag::Unknown;
  CertificateRoute route = CertificateRoute::None;

  // Exclusion evidence: shifted = sym(A) - diag(1/2,1) and its Sylvester
  // margins (leading entry, determinant); both > tol certifies exclusion.
  Mat2 shifted;
  double margin_leading = 0.0;
  double margin_det = 0.0;

  // Energy evidence: discrete cell energy of the witness field, or the best
  // value found when the solver cannot certify membership.
  double estimate = 0.0;
  std::optional<DisplacementField> witness;
  int iterations = 0;
  bool solver_converged = false;
};

// Shift test: if sym(A) - diag(1/2,1) is positive definite, quasiconvexity of
// sverak_V rules out zero-energy gradient sequences with mean A for the
// built-in composites (every matrix in either phase's zero set lands where
// the shifted sverak_V vanishes), so A cannot belong to the homogenized zero
// set. Returns ExcludedBySverak with the margins, or Unknown.
MembershipVerdict sverak_exclusion_test(const Mat2& A, double tol = 1e-12);

struct CertifyOptions {
  int N = 16;
  int k = 1;
  double zero_tol = 1e-8;
  SolverOptions solver;
};

// Certification pipeline for a two-phase composite built from the reference
// generator sets: exclusion test first, then analytic zero-energy witnesses
// (constant field when both phase densities vanish at A, exact two-generator
// laminates when A is the midpoint of a compatible generator pair), then the
// cell-problem solver. CertifiedMember always carries a witness field whose
// discrete cell energy is <= opts.zero_tol; otherwise Unknown reports the
// best estimate found. The exclusion step is applied only when the composite
// uses the reference generator sets, since its validity depends on them.
MembershipVerdict membership_certify(const CellEnergy& ce, const Mat2& A,
                                     const CertifyOptions& opts = {});

}  // namespace polyhom
