#include "convex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace polyhom {

namespace {

// Gauss-Jordan inverse with partial pivoting for small symmetric systems.
// Returns false if a pivot falls below the singularity threshold.
bool invert_small(std::vector<double> a, std::size_t n, double scale,
                  std::vector<double>& inv) {
  const double tiny = 1e-12 * std::max(1.0, scale);
  inv.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a[r * n + col]) > std::fabs(a[piv * n + col])) piv = r;
    if (std::fabs(a[piv * n + col]) <= tiny) return false;
    if (piv != col)
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(a[piv * n + c], a[col * n + c]);
        std::swap(inv[piv * n + c], inv[col * n + c]);
      }
    const double d = 1.0 / a[col * n + col];
    for (std::size_t c = 0; c < n; ++c) {
      a[col * n + c] *= d;
      inv[col * n + c] *= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r * n + col];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) {
        a[r * n + c] -= f * a[col * n + c];
        inv[r * n + c] -= f * inv[col * n + c];
      }
    }
  }
  return true;
}

}  // namespace

SimplexProjector::SimplexProjector(std::vector<std::vector<double>> gens)
    : gens_(std::move(gens)) {
  if (gens_.empty()) throw std::invalid_argument("SimplexProjector: no generators");
  if (gens_.size() > 8) throw std::invalid_argument("SimplexProjector: more than 8 generators");
  dim_ = gens_[0].size();
  if (dim_ < 1 || dim_ > 8) throw std::invalid_argument("SimplexProjector: dimension must be 1..8");
  for (const auto& g : gens_)
    if (g.size() != dim_) throw std::invalid_argument("SimplexProjector: inconsistent dimensions");

  const std::size_t n = gens_.size();
  const std::size_t max_m = std::min(n, dim_ + 1);
  // Enumerate subsets by bitmask; keep those of size 1..max_m with invertible Gram.
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> idx;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) idx.push_back(static_cast<int>(i));
    if (idx.size() > max_m) continue;
    Face f;
    f.idx = idx;
    const std::size_t m = idx.size();
    if (m > 1) {
      f.edges.resize((m - 1) * dim_);
      for (std::size_t i = 1; i < m; ++i)
        for (std::size_t d = 0; d < dim_; ++d)
          f.edges[(i - 1) * dim_ + d] = gens_[idx[i]][d] - gens_[idx[0]][d];
      std::vector<double> gram((m - 1) * (m - 1));
      double scale = 0.0;
      for (std::size_t i = 0; i + 1 < m; ++i)
        for (std::size_t j = 0; j + 1 < m; ++j) {
          double s = 0.0;
          for (std::size_t d = 0; d < dim_; ++d)
            s += f.edges[i * dim_ + d] * f.edges[j * dim_ + d];
          gram[i * (m - 1) + j] = s;
          scale = std::max(scale, std::fabs(s));
        }
      if (!invert_small(gram, m - 1, scale, f.inv_gram)) continue;  // affinely dependent
    }
    faces_.push_back(std::move(f));
  }
}

double SimplexProjector::project_sq(const double* p, double* proj_out,
                                    double* weights_out) const {
  double best = std::numeric_limits<double>::infinity();
  double best_q[8];
  double best_w[8];
  const Face* best_face = nullptr;

  double rhs[8], w[8], q[8];
  for (const Face& f : faces_) {
    const std::size_t m = f.idx.size();
    const auto& g0 = gens_[f.idx[0]];
    if (m == 1) {
      double d2 = 0.0;
      for (std::size_t d = 0; d < dim_; ++d) {
        const double t = p[d] - g0[d];
        d2 += t * t;
      }
      if (d2 < best) {
        best = d2;
        best_face = &f;
        for (std::size_t d = 0; d < dim_; ++d) best_q[d] = g0[d];
        best_w[0] = 1.0;
      }
      continue;
    }
    const std::size_t r = m - 1;
    for (std::size_t i = 0; i < r; ++i) {
      double s = 0.0;
      for (std::size_t d = 0; d < dim_; ++d)
        s += (p[d] - g0[d]) * f.edges[i * dim_ + d];
      rhs[i] = s;
    }
    bool feasible = true;
    double wsum = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < r; ++j) s += f.inv_gram[i * r + j] * rhs[j];
      w[i] = s;
      wsum += s;
      if (s < -1e-10) { feasible = false; break; }
    }
    if (!feasible || 1.0 - wsum < -1e-10) continue;
    double d2 = 0.0;
    for (std::size_t d = 0; d < dim_; ++d) {
      double qd = g0[d];
      for (std::size_t i = 0; i < r; ++i) qd += w[i] * f.edges[i * dim_ + d];
      q[d] = qd;
      const double t = p[d] - qd;
      d2 += t * t;
    }
    if (d2 < best) {
      best = d2;
      best_face = &f;
      for (std::size_t d = 0; d < dim_; ++d) best_q[d] = q[d];
      best_w[0] = 1.0 - wsum;
      for (std::size_t i = 0; i < r; ++i) best_w[i + 1] = w[i];
    }
  }

  if (proj_out)
    for (std::size_t d = 0; d < dim_; ++d) proj_out[d] = best_q[d];
  if (weights_out) {
    for (std::size_t i = 0; i < gens_.size(); ++i) weights_out[i] = 0.0;
    for (std::size_t i = 0; i < best_face->idx.size(); ++i)
      weights_out[best_face->idx[i]] = std::max(0.0, best_w[i]);
  }
  return std::max(0.0, best);
}

HullProjection project_convex_hull(const std::vector<double>& point,
                                   const std::vector<std::vector<double>>& gens) {
  SimplexProjector proj(gens);
  if (point.size() != proj.dim())
    throw std::invalid_argument("project_convex_hull: point dimension mismatch");
  HullProjection out;
  out.point.resize(proj.dim());
  out.weights.resize(gens.size());
  const double d2 = proj.project_sq(point.data(), out.point.data(), out.weights.data());
  out.distance = std::sqrt(d2);
  return out;
}

}  // namespace polyhom
