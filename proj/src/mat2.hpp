#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace polyhom {

// Real 2x2 matrix, row-major. Value type; all operations are free functions.
struct Mat2 {
  double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

  friend Mat2 operator+(const Mat2& x, const Mat2& y) {
    return {x.a11 + y.a11, x.a12 + y.a12, x.a21 + y.a21, x.a22 + y.a22};
  }
  friend Mat2 operator-(const Mat2& x, const Mat2& y) {
    return {x.a11 - y.a11, x.a12 - y.a12, x.a21 - y.a21, x.a22 - y.a22};
  }
  friend Mat2 operator*(double s, const Mat2& x) {
    return {s * x.a11, s * x.a12, s * x.a21, s * x.a22};
  }
  friend bool operator==(const Mat2& x, const Mat2& y) {
    return x.a11 == y.a11 && x.a12 == y.a12 && x.a21 == y.a21 && x.a22 == y.a22;
  }
};

// Minors vector (a11, a12, a21, a22, det) in R^5.
using MinorsVec = std::array<double, 5>;

inline Mat2 diag(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }

inline double det(const Mat2& m) { return m.a11 * m.a22 - m.a12 * m.a21; }

inline MinorsVec minors(const Mat2& m) {
  return {m.a11, m.a12, m.a21, m.a22, det(m)};
}

inline Mat2 sym_part(const Mat2& m) {
  const double off = 0.5 * (m.a12 + m.a21);
  return {m.a11, off, off, m.a22};
}

double frobenius_norm(const Mat2& m);
double frobenius_dist(const Mat2& x, const Mat2& y);

// Sylvester test on the symmetric part: E11 > tol and det(E) > tol.
bool is_positive_definite(const Mat2& m, double tol);

// Finite set of 2x2 matrices. Validation rejects empty sets and duplicates
// (pairwise Frobenius distance <= 1e-12 counts as a duplicate).
struct MatrixSet {
  std::vector<Mat2> elems;
  std::vector<std::string> labels;  // same length as elems, or empty

  std::size_t size() const { return elems.size(); }
};

// Throws std::invalid_argument on empty sets, duplicates, or label mismatch.
void validate(const MatrixSet& s);

MatrixSet make_set(std::vector<Mat2> elems, std::vector<std::string> labels = {});

// min over elements of |m - e|_F. Set must be valid.
double dist_to_set(const Mat2& m, const MatrixSet& s);

// The three matrix families of the homogenization counterexample, all diagonal.
// phase1/phase2 are the two composite phases; averages holds the midpoints
// (a1 + a2)/2 of the matched pair in each family.
namespace counterexample {

inline Mat2 zero_mat() { return {}; }
inline Mat2 phase1_a() { return diag(-0.5, 1.0); }   // paired with phase2_a
inline Mat2 phase1_b() { return diag(-2.0, 2.0); }   // paired with phase2_b
inline Mat2 phase2_a() { return diag(2.5, 1.0); }
inline Mat2 phase2_b() { return diag(3.0, 2.0); }
inline Mat2 average_a() { return diag(1.0, 1.0); }   // (phase1_a + phase2_a)/2
inline Mat2 average_b() { return diag(0.5, 2.0); }   // (phase1_b + phase2_b)/2

// The Sylvester-split shifts: shift_mean = (shift1 + shift2)/2. No matrix in
// phase1_set() - shift1 or phase2_set() - shift2 is positive definite.
inline Mat2 shift1() { return diag(-2.0, 1.0); }
inline Mat2 shift2() { return diag(3.0, 1.0); }
inline Mat2 shift_mean() { return diag(0.5, 1.0); }

MatrixSet phase1_set();    // {O, phase1_a, phase1_b}
MatrixSet phase2_set();    // {O, phase2_a, phase2_b}
MatrixSet averages_set();  // {O, average_a, average_b}

}  // namespace counterexample

}  // namespace polyhom
