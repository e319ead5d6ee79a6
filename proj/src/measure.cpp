#include "measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace polyhom {

std::int64_t EmpiricalTwoScaleMeasure::lambda_slots() const {
  const std::int64_t n = spec.n;
  return n * n * n * n + 1;
}

void EmpiricalTwoScaleMeasure::split_key(std::int64_t key, int& y1_bin,
                                         int& y2_bin,
                                         std::int64_t& lambda_out) const {
  const std::int64_t slots = lambda_slots();
  const std::int64_t yflat = key / slots;
  lambda_out = key % slots;
  if (lambda_out == slots - 1) lambda_out = kOverflow;
  y1_bin = static_cast<int>(yflat / y_bins);
  y2_bin = static_cast<int>(yflat % y_bins);
}

void EmpiricalTwoScaleMeasure::y_bin_center(int y1_bin, int y2_bin, double& y1,
                                            double& y2) const {
  y1 = (y1_bin + 0.5) / y_bins;
  y2 = (y2_bin + 0.5) / y_bins;
}

void EmpiricalTwoScaleMeasure::lambda_bin_bounds(std::int64_t lambda_index,
                                                 Mat2& lo, Mat2& hi) const {
  if (lambda_index < 0 || lambda_index >= lambda_slots() - 1)
    throw std::invalid_argument("lambda_bin_bounds: not a box bin");
  const double width = (spec.hi - spec.lo) / spec.n;
  int idx[4];
  std::int64_t rem = lambda_index;
  for (int e = 3; e >= 0; --e) {
    idx[e] = static_cast<int>(rem % spec.n);
    rem /= spec.n;
  }
  lo = Mat2{spec.lo + idx[0] * width, spec.lo + idx[1] * width,
            spec.lo + idx[2] * width, spec.lo + idx[3] * width};
  hi = Mat2{lo.a11 + width, lo.a12 + width, lo.a21 + width, lo.a22 + width};
}

double EmpiricalTwoScaleMeasure::total_weight() const {
  double s = 0.0;
  for (const auto& [key, w] : weights) s += w;
  return s;
}

namespace {

// Bin index of one matrix entry, or -1 when it falls outside [lo, hi).
int entry_bin(double v, const LambdaBinSpec& spec) {
  if (!(v >= spec.lo && v < spec.hi)) return -1;
  const int idx =
      static_cast<int>(std::floor((v - spec.lo) / (spec.hi - spec.lo) * spec.n));
  return std::clamp(idx, 0, spec.n - 1);
}

}  // namespace

EmpiricalTwoScaleMeasure empirical_two_scale_measure(
    const DisplacementField& f, int eps_denom, int y_bins,
    const LambdaBinSpec& spec) {
  if (y_bins < 1)
    throw std::invalid_argument("empirical_two_scale_measure: y_bins must be >= 1");
  if (spec.n < 1 || !(spec.lo < spec.hi))
    throw std::invalid_argument("empirical_two_scale_measure: bad lambda bin spec");

  EmpiricalTwoScaleMeasure m;
  m.y_bins = y_bins;
  m.spec = spec;
  const std::int64_t slots = m.lambda_slots();

  const std::int64_t nt = f.triangle_count();
  const double w = f.triangle_area() / f.domain_area();
  for (std::int64_t t = 0; t < nt; ++t) {
    double y1, y2;
    f.cell_coords(t, eps_denom, y1, y2);
    const int by1 = std::min(static_cast<int>(y1 * y_bins), y_bins - 1);
    const int by2 = std::min(static_cast<int>(y2 * y_bins), y_bins - 1);

    const Mat2 g = f.gradient(t);
    const int b11 = entry_bin(g.a11, spec), b12 = entry_bin(g.a12, spec);
    const int b21 = entry_bin(g.a21, spec), b22 = entry_bin(g.a22, spec);
    std::int64_t lambda = slots - 1;  // overflow
    if (b11 >= 0 && b12 >= 0 && b21 >= 0 && b22 >= 0)
      lambda = ((static_cast<std::int64_t>(b11) * spec.n + b12) * spec.n + b21) *
                   spec.n +
               b22;

    const std::int64_t key =
        (static_cast<std::int64_t>(by1) * y_bins + by2) * slots + lambda;
    m.weights[key] += w;
  }

  const double total = m.total_weight();
  for (auto& [key, wt] : m.weights) wt /= total;
  return m;
}

namespace {

// Smallest distance from a point set {elements of s} to the box [lo, hi]
// (entrywise), i.e. min over elements of the clamped-point distance.
double box_dist_to_set(const Mat2& lo, const Mat2& hi, const MatrixSet& s) {
  double best = std::numeric_limits<double>::infinity();
  for (const Mat2& e : s.elems) {
    const Mat2 c{std::clamp(e.a11, lo.a11, hi.a11),
                 std::clamp(e.a12, lo.a12, hi.a12),
                 std::clamp(e.a21, lo.a21, hi.a21),
                 std::clamp(e.a22, lo.a22, hi.a22)};
    best = std::min(best, frobenius_dist(c, e));
  }
  return best;
}

}  // namespace

SupportCheckResult support_check(const EmpiricalTwoScaleMeasure& m,
                                 const PartitionSpec& partition,
                                 const std::vector<MatrixSet>& sets,
                                 double tol) {
  if (static_cast<int>(sets.size()) != partition.n_phases)
    throw std::invalid_argument("support_check: one set per phase required");
  if (tol < 0.0) throw std::invalid_argument("support_check: tol must be >= 0");

  // Every y-bin must sit inside a single partition cell, otherwise a bin has
  // no well-defined phase.
  const double inv = 1.0 / m.y_bins;
  std::vector<int> bin_phase(static_cast<std::size_t>(m.y_bins) * m.y_bins, -1);
  for (int a = 0; a < m.y_bins; ++a) {
    for (int b = 0; b < m.y_bins; ++b) {
      bool covered = false;
      for (std::size_t c = 0; c < partition.cells.size(); ++c) {
        const Rect& r = partition.cells[c];
        if (a * inv >= r.x1lo && (a + 1) * inv <= r.x1hi && b * inv >= r.x2lo &&
            (b + 1) * inv <= r.x2hi) {
          bin_phase[static_cast<std::size_t>(a) * m.y_bins + b] =
              partition.phase[c];
          covered = true;
          break;
        }
      }
      if (!covered)
        throw std::invalid_argument(
            "support_check: y-bins do not refine the partition");
    }
  }

  SupportCheckResult res;
  for (const auto& [key, w] : m.weights) {
    int by1, by2;
    std::int64_t lambda;
    m.split_key(key, by1, by2, lambda);
    const int ph = bin_phase[static_cast<std::size_t>(by1) * m.y_bins + by2];
    if (lambda == EmpiricalTwoScaleMeasure::kOverflow) {
      res.escaped_mass += w;
      continue;
    }
    Mat2 lo, hi;
    m.lambda_bin_bounds(lambda, lo, hi);
    if (box_dist_to_set(lo, hi, sets.at(ph)) > tol) res.escaped_mass += w;
  }
  res.pass = res.escaped_mass <= tol;
  return res;
}

double escaped_fraction_pointwise(const DisplacementField& f, int eps_denom,
                                  const PartitionSpec& partition,
                                  const std::vector<MatrixSet>& sets,
                                  double tol) {
  const std::int64_t nt = f.triangle_count();
  std::int64_t escaped = 0;
  for (std::int64_t t = 0; t < nt; ++t) {
    double y1, y2;
    f.cell_coords(t, eps_denom, y1, y2);
    if (distance_integrand(y1, y2, f.gradient(t), partition, sets) > tol)
      ++escaped;
  }
  return static_cast<double>(escaped) / static_cast<double>(nt);
}

namespace {

// Integral over [0, t) of the indicator frac(x*m) in [vlo, vhi), in closed
// form: full periods plus the clamped remainder.
double axis_antiderivative(double t, double vlo, double vhi, int mdenom) {
  const double s = t * mdenom;
  const double full = std::floor(s);
  const double frac = s - full;
  return (full * (vhi - vlo) + std::clamp(frac, vlo, vhi) - vlo) / mdenom;
}

double axis_integral(double lo, double hi, double vlo, double vhi, int m) {
  return axis_antiderivative(hi, vlo, vhi, m) -
         axis_antiderivative(lo, vlo, vhi, m);
}

void require_in_unit_square(const Rect& r, const char* name) {
  if (!(r.x1lo >= 0.0 && r.x1lo <= r.x1hi && r.x1hi <= 1.0 && r.x2lo >= 0.0 &&
        r.x2lo <= r.x2hi && r.x2hi <= 1.0))
    throw std::invalid_argument(std::string("riemann_lebesgue_check: ") + name +
                                " must be a rectangle inside [0,1)^2");
}

}  // namespace

std::vector<double> riemann_lebesgue_check(const Rect& U, const Rect& V,
                                           const std::vector<int>& eps_denoms) {
  require_in_unit_square(U, "U");
  require_in_unit_square(V, "V");
  const double exact = U.area() * V.area();
  std::vector<double> errors;
  errors.reserve(eps_denoms.size());
  for (int m : eps_denoms) {
    if (m < 1)
      throw std::invalid_argument(
          "riemann_lebesgue_check: eps denominators must be >= 1");
    const double i1 = axis_integral(U.x1lo, U.x1hi, V.x1lo, V.x1hi, m);
    const double i2 = axis_integral(U.x2lo, U.x2hi, V.x2lo, V.x2hi, m);
    errors.push_back(std::fabs(i1 * i2 - exact));
  }
  return errors;
}

}  // namespace polyhom
