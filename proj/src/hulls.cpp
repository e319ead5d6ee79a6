#include "hulls.hpp"

#include <cmath>
#include <limits>

namespace polyhom {

namespace {

double dot(const Mat2& x, const Mat2& y) {
  return x.a11 * y.a11 + x.a12 * y.a12 + x.a21 * y.a21 + x.a22 * y.a22;
}

Mat2 combine(const Triple& tr, const std::array<double, 3>& t) {
  return t[0] * tr[0] + t[1] * tr[1] + t[2] * tr[2];
}

// Constraint form without simplex validation (internal use on raw weights).
double constraint_raw(const Triple& tr, const std::array<double, 3>& t) {
  const double d01 = det(tr[0] - tr[1]);
  const double d02 = det(tr[0] - tr[2]);
  const double d12 = det(tr[1] - tr[2]);
  return 2.0 * (t[0] * t[1] * d01 + t[0] * t[2] * d02 + t[1] * t[2] * d12);
}

void check_not_degenerate(const Triple& tr) {
  if (is_degenerate(tr)) throw degenerate_triple_error("triple is affinely dependent");
}

void check_simplex(const std::array<double, 3>& t) {
  const double sum = t[0] + t[1] + t[2];
  if (std::fabs(sum - 1.0) > 1e-9 || t[0] < -1e-9 || t[1] < -1e-9 || t[2] < -1e-9)
    throw std::invalid_argument("weights are off the simplex");
}

}  // namespace

bool is_degenerate(const Triple& tr) {
  const Mat2 d1 = tr[0] - tr[2];
  const Mat2 d2 = tr[1] - tr[2];
  const double g11 = dot(d1, d1), g12 = dot(d1, d2), g22 = dot(d2, d2);
  const double gram_det = g11 * g22 - g12 * g12;
  return gram_det <= 1e-20 * std::max(1.0, g11 * g22);
}

double pc_constraint(const Triple& tr, const std::array<double, 3>& weights) {
  check_simplex(weights);
  return constraint_raw(tr, weights);
}

double pc_constraint_via_identity(const Triple& tr,
                                  const std::array<double, 3>& weights) {
  check_simplex(weights);
  double lin = 0.0;
  for (int k = 0; k < 3; ++k) lin += weights[k] * det(tr[k]);
  return 2.0 * lin - 2.0 * det(combine(tr, weights));
}

namespace {

std::optional<HullCertificate> accept_weights(const Triple& tr, const Mat2& m,
                                              const std::array<double, 3>& t,
                                              double tol) {
  if (t[0] < -1e-12 || t[1] < -1e-12 || t[2] < -1e-12) return std::nullopt;
  HullCertificate cert;
  cert.weights = t;
  cert.residual_affine = frobenius_dist(combine(tr, t), m);
  cert.residual_det = constraint_raw(tr, t);
  if (cert.residual_affine > tol || std::fabs(cert.residual_det) > tol)
    return std::nullopt;
  return cert;
}

}  // namespace

std::optional<HullCertificate> pc_membership(const Triple& tr, const Mat2& m,
                                             double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("pc_membership: tol must be > 0");
  check_not_degenerate(tr);
  const Mat2 d1 = tr[0] - tr[2];
  const Mat2 d2 = tr[1] - tr[2];
  const Mat2 rhs = m - tr[2];
  const double g11 = dot(d1, d1), g12 = dot(d1, d2), g22 = dot(d2, d2);
  const double b1 = dot(d1, rhs), b2 = dot(d2, rhs);
  const double dg = g11 * g22 - g12 * g12;  // > 0 for non-degenerate triples
  const double t1 = (g22 * b1 - g12 * b2) / dg;
  const double t2 = (g11 * b2 - g12 * b1) / dg;
  return accept_weights(tr, m, {t1, t2, 1.0 - t1 - t2}, tol);
}

std::optional<HullCertificate> pc_membership_scan(const Triple& tr,
                                                  const Mat2& m, double tol,
                                                  double step) {
  if (!(tol > 0.0) || !(step > 0.0))
    throw std::invalid_argument("pc_membership_scan: tol and step must be > 0");
  check_not_degenerate(tr);
  const int n = static_cast<int>(std::lround(1.0 / step));

  // Grid pass: best candidate under max(affine residual, |constraint|).
  std::array<double, 3> best{1.0, 0.0, 0.0};
  double best_score = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n - i; ++j) {
      const std::array<double, 3> t{static_cast<double>(i) / n,
                                    static_cast<double>(j) / n,
                                    static_cast<double>(n - i - j) / n};
      const double score = std::max(frobenius_dist(combine(tr, t), m),
                                    std::fabs(constraint_raw(tr, t)));
      if (score < best_score) {
        best_score = score;
        best = t;
      }
    }
  }

  // One Gauss-Newton step on F(t1,t2) = (sum_k t_k C_k - m, constraint).
  const double d01 = det(tr[0] - tr[1]);
  const double d02 = det(tr[0] - tr[2]);
  const double d12 = det(tr[1] - tr[2]);
  const Mat2 e1 = tr[0] - tr[2];
  const Mat2 e2 = tr[1] - tr[2];
  const Mat2 r = combine(tr, best) - m;
  const double c = constraint_raw(tr, best);
  const double dc1 =
      2.0 * (best[1] * d01 + (best[2] - best[0]) * d02 - best[1] * d12);
  const double dc2 =
      2.0 * (best[0] * d01 - best[0] * d02 + (best[2] - best[1]) * d12);
  const double j11 = dot(e1, e1) + dc1 * dc1;
  const double j12 = dot(e1, e2) + dc1 * dc2;
  const double j22 = dot(e2, e2) + dc2 * dc2;
  const double f1 = dot(e1, r) + dc1 * c;
  const double f2 = dot(e2, r) + dc2 * c;
  const double dj = j11 * j22 - j12 * j12;
  std::array<double, 3> ref = best;
  if (std::fabs(dj) > 1e-300) {
    const double s1 = (j22 * f1 - j12 * f2) / dj;
    const double s2 = (j11 * f2 - j12 * f1) / dj;
    ref[0] = best[0] - s1;
    ref[1] = best[1] - s2;
    ref[2] = 1.0 - ref[0] - ref[1];
  }
  for (double& w : ref) w = std::max(w, 0.0);
  const double sum = ref[0] + ref[1] + ref[2];
  for (double& w : ref) w /= sum;

  if (auto cert = accept_weights(tr, m, ref, tol)) return cert;
  return accept_weights(tr, m, best, tol);
}

bool is_polyconvex_set(const Triple& tr, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("is_polyconvex_set: tol must be > 0");
  check_not_degenerate(tr);
  const double d01 = det(tr[0] - tr[1]);
  const double d02 = det(tr[0] - tr[2]);
  const double d12 = det(tr[1] - tr[2]);
  const bool all_pos = d01 > 0.0 && d02 > 0.0 && d12 > 0.0;
  const bool all_neg = d01 < 0.0 && d02 < 0.0 && d12 < 0.0;
  return all_pos || all_neg;
}

ScanResult scan_polyconvexity(const Triple& tr, double tol, double step) {
  if (!(tol > 0.0) || !(step > 0.0))
    throw std::invalid_argument("scan_polyconvexity: tol and step must be > 0");
  check_not_degenerate(tr);
  const int n = static_cast<int>(std::lround(1.0 / step));

  ScanResult res;
  res.constraint_min = std::numeric_limits<double>::infinity();
  res.constraint_max = -std::numeric_limits<double>::infinity();
  std::array<double, 3> argmin{}, argmax{};
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n - i; ++j) {
      const std::array<double, 3> t{static_cast<double>(i) / n,
                                    static_cast<double>(j) / n,
                                    static_cast<double>(n - i - j) / n};
      const double c = constraint_raw(tr, t);
      if (c < res.constraint_min) {
        res.constraint_min = c;
        argmin = t;
      }
      if (c > res.constraint_max) {
        res.constraint_max = c;
        argmax = t;
      }
      if (std::fabs(c) <= tol && !res.extra_point) {
        const Mat2 m = combine(tr, t);
        const double vdist = std::min(
            {frobenius_dist(m, tr[0]), frobenius_dist(m, tr[1]), frobenius_dist(m, tr[2])});
        if (vdist > tol) {
          res.extra_point = m;
          res.extra_weights = t;
        }
      }
    }
  }

  // A sign change across the simplex forces an interior zero of the
  // constraint; bisect the straddling segment to exhibit the point.
  if (!res.extra_point && res.constraint_min < -tol && res.constraint_max > tol) {
    std::array<double, 3> lo = argmax, hi = argmin;  // c(lo) > 0 > c(hi)
    for (int it = 0; it < 200; ++it) {
      std::array<double, 3> mid{0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1]),
                                0.5 * (lo[2] + hi[2])};
      if (constraint_raw(tr, mid) > 0.0)
        lo = mid;
      else
        hi = mid;
    }
    res.extra_weights = lo;
    res.extra_point = combine(tr, lo);
  }

  res.polyconvex = !res.extra_point.has_value();
  return res;
}

Mat2 b_arc(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("b_arc: t must be in [0,1]");
  const double root = std::sqrt(9.0 * t * t - 4.0 * t + 4.0);
  return diag((-3.0 * t + 2.0 + root) / 4.0, (3.0 * t + 2.0 + root) / 4.0);
}

std::vector<Mat2> pc_hull_of_averages(int n_arc_samples) {
  if (n_arc_samples < 0)
    throw std::invalid_argument("pc_hull_of_averages: sample count must be >= 0");
  using namespace counterexample;
  std::vector<Mat2> pts{zero_mat(), average_a(), average_b()};
  for (int i = 1; i <= n_arc_samples; ++i)
    pts.push_back(b_arc(static_cast<double>(i) / (n_arc_samples + 1)));
  return pts;
}

}  // namespace polyhom
