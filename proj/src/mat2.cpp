#include "mat2.hpp"

#include <cmath>
#include <stdexcept>

namespace polyhom {

double frobenius_norm(const Mat2& m) {
  return std::sqrt(m.a11 * m.a11 + m.a12 * m.a12 + m.a21 * m.a21 +
                   m.a22 * m.a22);
}

double frobenius_dist(const Mat2& x, const Mat2& y) {
  return frobenius_norm(x - y);
}

bool is_positive_definite(const Mat2& m, double tol) {
  if (!(tol >= 0.0)) throw std::invalid_argument("is_positive_definite: tol must be >= 0");
  const Mat2 e = sym_part(m);
  return e.a11 > tol && det(e) > tol;
}

void validate(const MatrixSet& s) {
  if (s.elems.empty()) throw std::invalid_argument("MatrixSet: empty");
  if (!s.labels.empty() && s.labels.size() != s.elems.size())
    throw std::invalid_argument("MatrixSet: label count mismatch");
  for (std::size_t i = 0; i < s.elems.size(); ++i)
    for (std::size_t j = i + 1; j < s.elems.size(); ++j)
      if (frobenius_dist(s.elems[i], s.elems[j]) <= 1e-12)
        throw std::invalid_argument("MatrixSet: duplicate elements");
}

MatrixSet make_set(std::vector<Mat2> elems, std::vector<std::string> labels) {
  MatrixSet s{std::move(elems), std::move(labels)};
  validate(s);
  return s;
}

double dist_to_set(const Mat2& m, const MatrixSet& s) {
  validate(s);
  double best = frobenius_dist(m, s.elems[0]);
  for (std::size_t i = 1; i < s.elems.size(); ++i)
    best = std::min(best, frobenius_dist(m, s.elems[i]));
  return best;
}

namespace counterexample {

MatrixSet phase1_set() {
  return make_set({zero_mat(), phase1_a(), phase1_b()}, {"O", "A1_1", "A1_2"});
}

MatrixSet phase2_set() {
  return make_set({zero_mat(), phase2_a(), phase2_b()}, {"O", "A2_1", "A2_2"});
}

MatrixSet averages_set() {
  return make_set({zero_mat(), average_a(), average_b()}, {"O", "B1", "B2"});
}

}  // namespace counterexample

}  // namespace polyhom
