#pragma once

#include <array>
#include <optional>
#include <stdexcept>

#include "mat2.hpp"

namespace polyhom {

// Unordered set of three pairwise distinct 2x2 matrices.
using Triple = std::array<Mat2, 3>;

struct degenerate_triple_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// True if the triple is affinely dependent as points of R^4 (the membership
// weight system is then singular). Such triples are rejected by the hull
// operations with degenerate_triple_error.
bool is_degenerate(const Triple& tr);

// sum_{k,j} t_k t_j det(C_k - C_j) over ordered pairs. Vanishing of this form
// on simplex weights characterizes points of the polyconvex hull of a triple.
// Throws if the weights are off the simplex by more than 1e-9.
double pc_constraint(const Triple& tr, const std::array<double, 3>& weights);

// Same value through the determinant expansion
// 2*sum_k t_k det(C_k) - 2*det(sum_k t_k C_k); used as an algebraic cross-check.
double pc_constraint_via_identity(const Triple& tr,
                                  const std::array<double, 3>& weights);

struct HullCertificate {
  std::array<double, 3> weights{};  // nonnegative within 1e-12, sum 1
  double residual_affine = 0.0;     // |sum_k w_k C_k - m|_F
  double residual_det = 0.0;        // pc_constraint at the weights
};

// Decides m in pc-hull(tr): solves the (unique) affine weight system by least
// squares, then requires feasible weights, affine residual <= tol, and
// |pc_constraint| <= tol. Returns the certificate on acceptance.
std::optional<HullCertificate> pc_membership(const Triple& tr, const Mat2& m,
                                             double tol);

// Brute-force membership: scan the weight simplex at the given step, pick the
// best candidate, apply one Gauss-Newton refinement on the combined
// (affine, constraint) system. Cross-check for pc_membership.
std::optional<HullCertificate> pc_membership_scan(const Triple& tr,
                                                  const Mat2& m, double tol,
                                                  double step = 1e-3);

// True iff the polyconvex hull of tr adds no points beyond tr itself.
// For a non-degenerate triple this holds exactly when the three pairwise
// determinants det(C_k - C_j) share a strict sign: a zero determinant puts a
// rank-one segment in the hull, and mixed signs force an interior zero of the
// constraint form.
bool is_polyconvex_set(const Triple& tr, double tol);

struct ScanResult {
  bool polyconvex = false;
  double constraint_min = 0.0;
  double constraint_max = 0.0;
  // Set when the scan exhibits a hull point beyond the triple.
  std::optional<Mat2> extra_point;
  std::array<double, 3> extra_weights{};
};

// Brute-force verdict: scans the weight simplex at the given step; any
// accepted non-vertex point (|constraint| <= tol away from all vertices) or a
// sign change of the constraint disproves polyconvexity. On a sign change the
// crossing is bisected to machine precision to produce a concrete extra point.
ScanResult scan_polyconvexity(const Triple& tr, double tol, double step = 1e-3);

// The nontrivial arc of the polyconvex hull of the averages triple:
// b_arc(t) = diag(b1(t), b2(t)) with
//   b1 = (-3t + 2 + sqrt(9t^2 - 4t + 4)) / 4,
//   b2 = ( 3t + 2 + sqrt(9t^2 - 4t + 4)) / 4,
// running from average_a at t=0 to average_b at t=1. Requires t in [0,1].
Mat2 b_arc(double t);

// The polyconvex hull of the averages triple, materialized as the three
// vertices plus n equally spaced arc samples b_arc(i/(n+1)), i = 1..n.
std::vector<Mat2> pc_hull_of_averages(int n_arc_samples);

}  // namespace polyhom
