#include "membership.hpp"

#include <stdexcept>

namespace polyhom {

const char* to_string(MembershipTag t) {
  switch (t) {
    case MembershipTag::CertifiedMember: return "CertifiedMember";
    case MembershipTag::ExcludedBySverak: return "ExcludedBySverak";
    case MembershipTag::Unknown: return "Unknown";
  }
  return "?";
}

const char* to_string(CertificateRoute r) {
  switch (r) {
    case CertificateRoute::None: return "none";
    case CertificateRoute::Exclusion: return "exclusion";
    case CertificateRoute::ConstantField: return "constant-field";
    case CertificateRoute::Laminate: return "laminate";
    case CertificateRoute::Solver: return "solver";
  }
  return "?";
}

MembershipVerdict sverak_exclusion_test(const Mat2& A, double tol) {
  MembershipVerdict v;
  v.shifted = sym_part(A) - counterexample::shift_mean();
  v.margin_leading = v.shifted.a11;
  v.margin_det = det(v.shifted);
  if (is_positive_definite(v.shifted, tol)) {
    v.tag = MembershipTag::ExcludedBySverak;
    v.route = CertificateRoute::Exclusion;
  }
  return v;
}

namespace {

bool sets_match(const MatrixSet& a, const MatrixSet& b) {
  if (a.elems.size() != b.elems.size()) return false;
  for (std::size_t i = 0; i < a.elems.size(); ++i)
    if (frobenius_dist(a.elems[i], b.elems[i]) > 1e-12) return false;
  return true;
}

// The shift argument is sound only for composites whose phase zero sets are
// built from the reference generators (either hull flavor keeps the zero set
// inside the region where the shifted sverak_V vanishes).
bool exclusion_applies(const CellEnergy& ce) {
  return ce.phases.size() == 2 &&
         sets_match(ce.phases[0]->generators(), counterexample::phase1_set()) &&
         sets_match(ce.phases[1]->generators(), counterexample::phase2_set());
}

}  // namespace

MembershipVerdict membership_certify(const CellEnergy& ce, const Mat2& A,
                                     const CertifyOptions& opts) {
  if (ce.phases.size() != 2)
    throw std::invalid_argument("membership_certify: composite must have two phases");
  if (opts.zero_tol <= 0.0)
    throw std::invalid_argument("membership_certify: zero_tol must be > 0");

  if (exclusion_applies(ce)) {
    MembershipVerdict ex = sverak_exclusion_test(A);
    if (ex.tag == MembershipTag::ExcludedBySverak) return ex;
  }

  // Constant field: valid whenever both phase densities vanish at A.
  if (ce.phases[0]->value(A) <= 0.0 && ce.phases[1]->value(A) <= 0.0) {
    MembershipVerdict v;
    v.tag = MembershipTag::CertifiedMember;
    v.route = CertificateRoute::ConstantField;
    v.witness.emplace(opts.N, opts.k, A);
    v.estimate = discrete_energy(ce, *v.witness, /*eps_denom=*/1);
    if (v.estimate <= opts.zero_tol) return v;
  }

  // Exact laminate between one generator of each phase: needs midpoint A and
  // an interface-compatible difference (zero second column).
  const MatrixSet& g1 = ce.phases[0]->generators();
  const MatrixSet& g2 = ce.phases[1]->generators();
  for (const Mat2& a1 : g1.elems) {
    for (const Mat2& a2 : g2.elems) {
      const Mat2 mid = 0.5 * (a1 + a2);
      const Mat2 d = a1 - a2;
      if (frobenius_dist(mid, A) > 1e-12) continue;
      if (d.a12 != 0.0 || d.a22 != 0.0) continue;
      MembershipVerdict v;
      v.tag = MembershipTag::CertifiedMember;
      v.route = CertificateRoute::Laminate;
      v.witness.emplace(laminate_field(a1, a2, /*eps_denom=*/1, opts.N, opts.k));
      v.estimate = discrete_energy(ce, *v.witness, /*eps_denom=*/1);
      if (v.estimate <= opts.zero_tol) return v;
    }
  }

  CellProblemResult r = cell_problem_minimize(ce, A, opts.N, opts.k, opts.solver);
  MembershipVerdict v;
  v.route = CertificateRoute::Solver;
  v.estimate = r.estimate;
  v.iterations = r.iterations;
  v.solver_converged = r.converged;
  if (r.estimate <= opts.zero_tol) {
    v.tag = MembershipTag::CertifiedMember;
    v.witness = std::move(r.field);
  }
  return v;
}

}  // namespace polyhom
