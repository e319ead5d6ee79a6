#include "field.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "rng.hpp"

namespace polyhom {

DisplacementField::DisplacementField(int N, int k, const Mat2& mean)
    : n_(N), k_(k), side_(N * k), mean_(mean) {
  if (N < 1 || k < 1)
    throw std::invalid_argument("DisplacementField: N and k must be >= 1");
  if (static_cast<long long>(side_) * side_ > (1ll << 28))
    throw std::invalid_argument("DisplacementField: grid too large");
  data_.assign(static_cast<std::size_t>(side_) * side_ * 2, 0.0);
}

void DisplacementField::centroid(std::int64_t tri, double& x1, double& x2) const {
  const std::int64_t sq = tri / 2;
  const bool upper = tri % 2;
  const int i = static_cast<int>(sq / side_);
  const int j = static_cast<int>(sq % side_);
  const double h = spacing();
  if (!upper) {
    x1 = (i + 2.0 / 3.0) * h;
    x2 = (j + 1.0 / 3.0) * h;
  } else {
    x1 = (i + 1.0 / 3.0) * h;
    x2 = (j + 2.0 / 3.0) * h;
  }
}

void DisplacementField::cell_coords(std::int64_t tri, int eps_denom,
                                    double& y1, double& y2) const {
  if (eps_denom < 1)
    throw std::invalid_argument("cell_coords: eps_denom must be >= 1");
  const std::int64_t sq = tri / 2;
  const bool upper = tri % 2;
  const std::int64_t i = (sq / side_) % n_;
  const std::int64_t j = (sq % side_) % n_;
  // centroid * m = ((i + 2/3) m / N, (j + 1/3) m / N) for lower triangles and
  // the transpose offsets for upper ones; its fractional part is exactly a
  // multiple of 1/(3N).
  const std::int64_t m = eps_denom;
  const std::int64_t three_n = 3ll * n_;
  const std::int64_t n1 = (3 * i * m + (upper ? m : 2 * m)) % three_n;
  const std::int64_t n2 = (3 * j * m + (upper ? 2 * m : m)) % three_n;
  y1 = static_cast<double>(n1) / static_cast<double>(three_n);
  y2 = static_cast<double>(n2) / static_cast<double>(three_n);
}

Mat2 DisplacementField::perturbation_gradient(std::int64_t tri) const {
  const std::int64_t sq = tri / 2;
  const bool upper = tri % 2;
  const int i = static_cast<int>(sq / side_);
  const int j = static_cast<int>(sq % side_);
  const double inv_h = static_cast<double>(n_);
  Mat2 g;
  if (!upper) {
    // vertices (i,j), (i+1,j), (i+1,j+1)
    g.a11 = (u(i + 1, j, 0) - u(i, j, 0)) * inv_h;
    g.a21 = (u(i + 1, j, 1) - u(i, j, 1)) * inv_h;
    g.a12 = (u(i + 1, j + 1, 0) - u(i + 1, j, 0)) * inv_h;
    g.a22 = (u(i + 1, j + 1, 1) - u(i + 1, j, 1)) * inv_h;
  } else {
    // vertices (i,j), (i+1,j+1), (i,j+1)
    g.a12 = (u(i, j + 1, 0) - u(i, j, 0)) * inv_h;
    g.a22 = (u(i, j + 1, 1) - u(i, j, 1)) * inv_h;
    g.a11 = (u(i + 1, j + 1, 0) - u(i, j + 1, 0)) * inv_h;
    g.a21 = (u(i + 1, j + 1, 1) - u(i, j + 1, 1)) * inv_h;
  }
  return g;
}

namespace {

void check_alignment(int N, int eps_denom, const char* who) {
  if (eps_denom < 1)
    throw std::invalid_argument(std::string(who) + ": eps_denom must be >= 1");
  if (N % (2 * eps_denom) != 0)
    throw alignment_error(std::string(who) +
                          ": N must be divisible by 2*eps_denom so the scale-eps "
                          "interfaces land on grid lines");
}

}  // namespace

DisplacementField laminate_field(const Mat2& m1, const Mat2& m2, int eps_denom,
                                 int N, int k) {
  check_alignment(N, eps_denom, "laminate_field");
  const Mat2 diff = m1 - m2;
  if (diff.a12 != 0.0 || diff.a22 != 0.0)
    throw std::invalid_argument(
        "laminate_field: m1 - m2 must have zero second column");
  DisplacementField f(N, k, 0.5 * (m1 + m2));
  const int side = f.side();
  const int m = eps_denom;
  // Continuous sawtooth T with slope +1/2 where frac(x1/eps) < 1/2 and -1/2
  // elsewhere; nodal values are exact rationals q / (2 m N).
  for (int i = 0; i < side; ++i) {
    const int q = (i * m) % N;          // frac(x_i/eps) = q/N
    const int num = (2 * q < N) ? q : (N - q);
    const double t = static_cast<double>(num) / (2.0 * m * N);
    const double w1 = diff.a11 * t;
    const double w2 = diff.a21 * t;
    for (int j = 0; j < side; ++j) {
      f.u(i, j, 0) = w1;
      f.u(i, j, 1) = w2;
    }
  }
  return f;
}

DisplacementField shift_transform(const DisplacementField& f, int eps_denom) {
  check_alignment(f.grid_n(), eps_denom, "shift_transform");
  DisplacementField out = f;
  out.set_mean(f.mean() - counterexample::shift_mean());
  const int side = f.side();
  const int m = eps_denom;
  const int N = f.grid_n();
  for (int i = 0; i < side; ++i) {
    const int q = (i * m) % N;
    // (5/2) * eps * |frac(x_i/eps) - 1/2| = (5/2) * |2q - N| / (2 m N)
    const double saw =
        2.5 * static_cast<double>(std::abs(2 * q - N)) / (2.0 * m * N);
    for (int j = 0; j < side; ++j) out.u(i, j, 0) -= saw;
  }
  return out;
}

Mat2 mean_gradient(const DisplacementField& f) {
  Mat2 sum;
  const std::int64_t nt = f.triangle_count();
  for (std::int64_t t = 0; t < nt; ++t) sum = sum + f.gradient(t);
  return (f.triangle_area() / f.domain_area()) * sum;
}

DisplacementField tile_field(const DisplacementField& f, int k_new) {
  if (k_new < f.periods() || k_new % f.periods() != 0)
    throw std::invalid_argument("tile_field: k_new must be a positive multiple of periods()");
  DisplacementField out(f.grid_n(), k_new, f.mean());
  for (int i = 0; i < out.side(); ++i)
    for (int j = 0; j < out.side(); ++j)
      for (int c = 0; c < 2; ++c) out.u(i, j, c) = f.u(i % f.side(), j % f.side(), c);
  return out;
}

void save_field(const DisplacementField& f, const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw std::runtime_error("save_field: cannot open " + path);
  std::fprintf(fp, "%d %d\n", f.grid_n(), f.periods());
  for (int i = 0; i < f.side(); ++i)
    for (int j = 0; j < f.side(); ++j)
      std::fprintf(fp, "%d %d %.17g %.17g\n", i, j, f.u(i, j, 0), f.u(i, j, 1));
  if (std::fclose(fp) != 0) throw std::runtime_error("save_field: write failed");
}

DisplacementField load_field(const std::string& path, const Mat2& mean) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_field: cannot open " + path);
  int N = 0, k = 0;
  if (!(in >> N >> k)) throw std::runtime_error("load_field: bad header");
  DisplacementField f(N, k, mean);
  const std::int64_t expect = static_cast<std::int64_t>(f.side()) * f.side();
  std::vector<bool> seen(expect, false);
  for (std::int64_t row = 0; row < expect; ++row) {
    int i, j;
    double u1, u2;
    if (!(in >> i >> j >> u1 >> u2))
      throw std::runtime_error("load_field: truncated file");
    if (i < 0 || i >= f.side() || j < 0 || j >= f.side())
      throw std::runtime_error("load_field: node index out of range");
    if (!std::isfinite(u1) || !std::isfinite(u2))
      throw std::runtime_error("load_field: non-finite value");
    const std::int64_t flat = static_cast<std::int64_t>(i) * f.side() + j;
    if (seen[flat]) throw std::runtime_error("load_field: duplicate node");
    seen[flat] = true;
    f.u(i, j, 0) = u1;
    f.u(i, j, 1) = u2;
  }
  return f;
}

double corrupt_field(DisplacementField& f, double target_fraction,
                     double magnitude, std::uint64_t seed) {
  if (!(target_fraction > 0.0 && target_fraction <= 0.5))
    throw std::invalid_argument("corrupt_field: fraction must be in (0, 0.5]");
  const std::int64_t total = f.triangle_count();
  std::int64_t want_nodes =
      std::llround(target_fraction * static_cast<double>(total) / 6.0);
  if (want_nodes < 1) want_nodes = 1;
  // Nodes on the even sublattice never share a triangle, so each corrupts
  // exactly 6 of them.
  const int half = f.side() / 2;
  if (want_nodes > static_cast<std::int64_t>(half) * half)
    throw std::invalid_argument("corrupt_field: fraction too large for grid");
  SplitMix64 rng(seed);
  std::set<std::pair<int, int>> chosen;
  while (static_cast<std::int64_t>(chosen.size()) < want_nodes) {
    const int a = static_cast<int>(rng.next_below(half));
    const int b = static_cast<int>(rng.next_below(half));
    chosen.insert({2 * a, 2 * b});
  }
  for (const auto& [i, j] : chosen) f.u(i, j, 0) += magnitude;
  return 6.0 * static_cast<double>(want_nodes) / static_cast<double>(total);
}

}  // namespace polyhom
