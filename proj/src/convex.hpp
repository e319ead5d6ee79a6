#pragma once

#include <cstddef>
#include <vector>

namespace polyhom {

// Exact Euclidean projection onto the convex hull of a small generator set
// (at most 8 generators, ambient dimension 1..8).
//
// Method: the projection lies in the relative interior of a face spanned by an
// affinely independent subset of generators (Caratheodory), so enumerating all
// subsets of size <= dim+1, projecting onto each affine span, and keeping the
// nearest candidate with nonnegative barycentric weights is exact up to the
// small linear solves. Affinely dependent subsets are skipped; their faces are
// covered by smaller subsets.
class SimplexProjector {
 public:
  // gens: generator points, all of the same dimension.
  explicit SimplexProjector(std::vector<std::vector<double>> gens);

  std::size_t dim() const { return dim_; }
  std::size_t generator_count() const { return gens_.size(); }

  // Returns the squared distance from p (length dim) to the hull.
  // proj_out (length dim) and weights_out (length generator_count) are
  // optional; weights are nonnegative and sum to 1 within roundoff.
  double project_sq(const double* p, double* proj_out = nullptr,
                    double* weights_out = nullptr) const;

 private:
  struct Face {
    std::vector<int> idx;        // generator indices, size m >= 1
    std::vector<double> edges;   // (m-1) x dim, row-major: g_i - g_0
    std::vector<double> inv_gram;  // (m-1) x (m-1) inverse Gram, row-major
  };

  std::size_t dim_ = 0;
  std::vector<std::vector<double>> gens_;
  std::vector<Face> faces_;
};

struct HullProjection {
  double distance = 0.0;
  std::vector<double> weights;  // one per generator
  std::vector<double> point;    // the projection
};

// One-shot convenience wrapper around SimplexProjector.
HullProjection project_convex_hull(const std::vector<double>& point,
                                   const std::vector<std::vector<double>>& gens);

}  // namespace polyhom
