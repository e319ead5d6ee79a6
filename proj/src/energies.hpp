#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mat2.hpp"

namespace polyhom {

// Energy density on 2x2 matrices with p-growth, vanishing on a prescribed set.
class EnergyDensity {
 public:
  virtual ~EnergyDensity() = default;
  virtual double value(const Mat2& m) const = 0;
  // Derivative with respect to the four matrix entries.
  virtual Mat2 gradient(const Mat2& m) const = 0;
  // Fused evaluation; the projections dominate the cost, so implementations
  // override this to compute both from one projection pass.
  virtual double value_and_gradient(const Mat2& m, Mat2& grad_out) const {
    grad_out = gradient(m);
    return value(m);
  }
  virtual double growth_p() const = 0;
  // Generators the energy was built from (the zero set, or its hull's vertices).
  virtual const MatrixSet& generators() const = 0;
  virtual const std::string& label() const = 0;
};

// W(m) = max( dist^p(m, conv a), dist^(p/2)(minors(m), conv minors(a)) ).
// Vanishes exactly on a when a is its own polyconvex hull; the minors branch
// exponent p/2 keeps p-growth since det is quadratic. Requires p >= 2; the
// gradient of the minors branch needs p >= 4 where that branch attains with
// zero distance (the solver default p = 4 is safe everywhere).
std::shared_ptr<EnergyDensity> build_zero_set_energy(const MatrixSet& a, double p);

// W(m) = dist^p(m, conv a): convex density vanishing on the whole hull of a.
std::shared_ptr<EnergyDensity> convex_hull_distance_energy(const MatrixSet& a,
                                                           double p);

// det(sym_part(m)) when sym_part(m) is positive definite, 0 otherwise.
// Polyconvex, and continuous because det(E) -> 0 at the cone boundary.
double sverak_V(const Mat2& m);

// Axis-aligned half-open rectangle [x1lo,x1hi) x [x2lo,x2hi).
struct Rect {
  double x1lo = 0.0, x1hi = 0.0, x2lo = 0.0, x2hi = 0.0;
  bool contains(double y1, double y2) const {
    return y1 >= x1lo && y1 < x1hi && y2 >= x2lo && y2 < x2hi;
  }
  double area() const { return (x1hi - x1lo) * (x2hi - x2lo); }
};

// Partition of the unit cell [0,1)^2 into phase-labeled rectangles.
struct PartitionSpec {
  std::vector<Rect> cells;
  std::vector<int> phase;  // one label per cell, values in [0, n_phases)
  int n_phases = 0;

  int phase_at(double y1, double y2) const;  // throws if y is uncovered
};

// The two-phase vertical split: phase 0 on [0,1/2) x [0,1), phase 1 on the rest.
PartitionSpec vertical_halves();

// Distance from m to the set attached to the phase containing y in [0,1)^2.
double distance_integrand(double y1, double y2, const Mat2& m,
                          const PartitionSpec& partition,
                          const std::vector<MatrixSet>& sets);

// Heterogeneous density W(y, m): one EnergyDensity per phase of a partition.
struct CellEnergy {
  PartitionSpec partition;
  std::vector<std::shared_ptr<EnergyDensity>> phases;

  double value(double y1, double y2, const Mat2& m) const;
  Mat2 gradient(double y1, double y2, const Mat2& m) const;
  double value_and_gradient(double y1, double y2, const Mat2& m,
                            Mat2& grad_out) const;
  const EnergyDensity& phase_energy(double y1, double y2) const;
};

// The two-phase composite density: zero-set energies on phase1_set/phase2_set.
CellEnergy composite_cell_energy(double p);

// Variant with the relaxed second phase: dist^p(m, conv(phase2_set)).
CellEnergy composite_cell_energy_convex_phase2(double p);

struct CoercivityBounds {
  double c1 = 0.0, c2 = 0.0, c3 = 0.0;  // c1|m|^p - c2 <= W(m) <= c3(1 + |m|^p)
};

// Derives bounds from the generator geometry (c2 = R^p with R the largest
// generator norm, c1 capped at 1) and certifies both inequalities at grid_n^2
// deterministic sample matrices of Frobenius norm <= radius. Throws
// std::logic_error if certification fails.
CoercivityBounds coercivity_check(const EnergyDensity& e, double radius,
                                  int grid_n);

}  // namespace polyhom
