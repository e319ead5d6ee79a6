#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "energies.hpp"
#include "field.hpp"
#include "mat2.hpp"

namespace polyhom {

// Binning of matrix space: each of the four entries is split into n intervals
// over [lo, hi); anything outside lands in a single overflow bin.
struct LambdaBinSpec {
  double lo = -5.0;
  double hi = 5.0;
  int n = 20;
};

// Area-weighted joint histogram of (unit-cell position, gradient) over the
// triangles of a field: the empirical counterpart of a two-scale limit
// measure. y-bins form a y_bins x y_bins grid over [0,1)^2; lambda bins
// follow LambdaBinSpec. Sparse: only occupied bins are stored.
struct EmpiricalTwoScaleMeasure {
  int y_bins = 1;
  LambdaBinSpec spec;

  static constexpr std::int64_t kOverflow = -1;

  // key = y_flat * (n^4 + 1) + lambda_index, lambda_index in [0, n^4] with
  // n^4 reserved for overflow. Values are nonnegative and sum to 1.
  std::map<std::int64_t, double> weights;

  std::int64_t lambda_slots() const;  // n^4 + 1
  // Decompose a key; lambda_out = kOverflow for the overflow bin.
  void split_key(std::int64_t key, int& y1_bin, int& y2_bin,
                 std::int64_t& lambda_out) const;
  // Center of a y-bin.
  void y_bin_center(int y1_bin, int y2_bin, double& y1, double& y2) const;
  // Bounds of a lambda bin as two matrices (entrywise lo, hi).
  void lambda_bin_bounds(std::int64_t lambda_index, Mat2& lo, Mat2& hi) const;

  double total_weight() const;
};

// Deposit each triangle's area fraction into the bin pair (y-bin containing
// frac(centroid/eps), lambda-bin containing the gradient), then normalize.
EmpiricalTwoScaleMeasure empirical_two_scale_measure(
    const DisplacementField& f, int eps_denom, int y_bins,
    const LambdaBinSpec& spec = {});

struct SupportCheckResult {
  bool pass = false;
  double escaped_mass = 0.0;
};

// Mass sitting in lambda bins farther than tol from the matrix set of the
// phase owning the y-bin (overflow always counts as escaped). Requires every
// y-bin to lie inside a single partition cell. pass <=> escaped_mass <= tol.
SupportCheckResult support_check(const EmpiricalTwoScaleMeasure& m,
                                 const PartitionSpec& partition,
                                 const std::vector<MatrixSet>& sets,
                                 double tol);

// Pointwise cross-check of the same property: area fraction of triangles
// whose gradient is farther than tol from its phase's set. Agrees with
// support_check's escaped_mass up to bin resolution.
double escaped_fraction_pointwise(const DisplacementField& f, int eps_denom,
                                  const PartitionSpec& partition,
                                  const std::vector<MatrixSet>& sets,
                                  double tol);

// Exact |integral over [0,1)^2 of chi_U(x) chi_V(frac(x/eps)) dx - |U||V||
// for each eps = 1/m in eps_denoms; rectangles make the integral separable
// per axis with a closed-form antiderivative.
std::vector<double> riemann_lebesgue_check(const Rect& U, const Rect& V,
                                           const std::vector<int>& eps_denoms);

}  // namespace polyhom
