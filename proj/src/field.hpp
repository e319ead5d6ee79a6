#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mat2.hpp"

namespace polyhom {

struct alignment_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Piecewise affine displacement over the torus [0,k)^2: a macroscopic mean
// gradient plus a periodic nodal perturbation on a (kN) x (kN) grid of
// spacing 1/N, interpolated on the crossed triangulation (each grid square is
// split along its main diagonal into a lower and an upper triangle).
//
// Node (i,j) sits at (i/N, j/N); indices wrap modulo kN. Triangle gradients
// reproduce nodal differences exactly (the interpolant is affine per triangle).
class DisplacementField {
 public:
  DisplacementField(int N, int k, const Mat2& mean);

  int grid_n() const { return n_; }
  int periods() const { return k_; }
  int side() const { return side_; }            // kN nodes per direction
  double spacing() const { return 1.0 / n_; }
  double domain_area() const { return static_cast<double>(k_) * k_; }

  const Mat2& mean() const { return mean_; }
  void set_mean(const Mat2& m) { mean_ = m; }

  // Nodal access with periodic wrap.
  double u(int i, int j, int comp) const { return data_[index(i, j, comp)]; }
  double& u(int i, int j, int comp) { return data_[index(i, j, comp)]; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  // Triangles: id = 2*(i*side + j) + upper, for square (i,j).
  std::int64_t triangle_count() const {
    return 2ll * side_ * side_;
  }
  double triangle_area() const { return 0.5 / (static_cast<double>(n_) * n_); }

  // Centroid in [0,k)^2.
  void centroid(std::int64_t tri, double& x1, double& x2) const;

  // frac(centroid * eps_denom): unit-cell coordinates of the triangle's
  // centroid at scale eps = 1/eps_denom. Exact, the value has denominator 3N.
  void cell_coords(std::int64_t tri, int eps_denom, double& y1,
                   double& y2) const;

  // Gradient of the periodic perturbation alone, and the total gradient
  // mean + perturbation.
  Mat2 perturbation_gradient(std::int64_t tri) const;
  Mat2 gradient(std::int64_t tri) const {
    return mean_ + perturbation_gradient(tri);
  }

 private:
  std::size_t index(int i, int j, int comp) const {
    const int ii = wrap(i), jj = wrap(j);
    return (static_cast<std::size_t>(ii) * side_ + jj) * 2 + comp;
  }
  int wrap(int i) const {
    i %= side_;
    return i < 0 ? i + side_ : i;
  }

  int n_ = 0, k_ = 0, side_ = 0;
  Mat2 mean_;
  std::vector<double> data_;
};

// Simple laminate in the first coordinate at scale eps = 1/eps_denom:
// total gradient is exactly m1 on triangles with frac(x1/eps) < 1/2 and m2
// otherwise, mean gradient (m1+m2)/2. Requires m1 - m2 with zero second
// column (rank-one jump across interfaces with normal e1) and N divisible by
// 2*eps_denom so interfaces land on grid lines.
DisplacementField laminate_field(const Mat2& m1, const Mat2& m2, int eps_denom,
                                 int N, int k);

// Subtracts the continuous piecewise affine map whose gradient is
// shift1 = diag(-2,1) on the eps-phase-1 slabs and shift2 = diag(3,1) on the
// rest: per triangle, grad(out) = grad(f) - shift1 or shift2 by the slab of
// the triangle centroid. Requires N divisible by 2*eps_denom.
DisplacementField shift_transform(const DisplacementField& f, int eps_denom);

// Area-weighted average of the total gradient (the periodic part integrates
// to zero, so this equals mean() up to roundoff; exposed for verification).
Mat2 mean_gradient(const DisplacementField& f);

// Periodic extension of f to k_new periods (k_new must be a positive multiple
// of f.periods()); used to warm-start multi-cell solves.
DisplacementField tile_field(const DisplacementField& f, int k_new);

// Text format: header "N k", then side*side lines "i j u1 u2" in row-major
// order with 17 significant digits (round-trip exact). The mean matrix is not
// part of the format; load supplies it.
void save_field(const DisplacementField& f, const std::string& path);
DisplacementField load_field(const std::string& path, const Mat2& mean);

// Adds `magnitude` to the first displacement component of enough pairwise
// non-adjacent nodes (chosen deterministically from the seed) to corrupt
// approximately target_fraction of all triangles; each chosen node corrupts
// exactly its 6 incident triangles. Returns the realized fraction.
double corrupt_field(DisplacementField& f, double target_fraction,
                     double magnitude, std::uint64_t seed);

}  // namespace polyhom
