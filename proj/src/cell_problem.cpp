#include "cell_problem.hpp"

#include <cmath>
#include <cstring>
#include <deque>
#include <stdexcept>

#include "parallel.hpp"

namespace polyhom {

namespace {

std::vector<const EnergyDensity*> triangle_phases(const CellEnergy& ce,
                                                  const DisplacementField& f,
                                                  int eps_denom) {
  if (eps_denom < 1)
    throw std::invalid_argument("discrete_energy: eps_denom must be >= 1");
  const std::int64_t nt = f.triangle_count();
  std::vector<const EnergyDensity*> phase(nt);
  for (std::int64_t t = 0; t < nt; ++t) {
    double y1, y2;
    f.cell_coords(t, eps_denom, y1, y2);
    const int ph = ce.partition.phase_at(y1, y2);
    phase[t] = ce.phases.at(ph).get();
  }
  return phase;
}

// Shared evaluation core. Computes area-weighted per-triangle energies and,
// when stresses != nullptr, dW/dG per triangle (row-major a11,a12,a21,a22).
void per_triangle_pass(const std::vector<const EnergyDensity*>& phase,
                       const DisplacementField& f, double* energies,
                       double* stresses, int threads) {
  const std::int64_t nt = f.triangle_count();
  const double area = f.triangle_area();
  parallel_for(nt, threads, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t t = lo; t < hi; ++t) {
      const Mat2 g = f.gradient(t);
      if (stresses) {
        Mat2 s;
        energies[t] = area * phase[t]->value_and_gradient(g, s);
        stresses[4 * t + 0] = s.a11;
        stresses[4 * t + 1] = s.a12;
        stresses[4 * t + 2] = s.a21;
        stresses[4 * t + 3] = s.a22;
      } else {
        energies[t] = area * phase[t]->value(g);
      }
    }
  });
}

// Gather dE/d(nodal values): node (i,j) touches six triangles; the entries of
// each triangle's stress enter through the finite-difference stencil.
void assemble_nodal_gradient(const DisplacementField& f,
                             const std::vector<double>& stresses,
                             std::vector<double>& grad, int threads) {
  const int side = f.side();
  const double scale =
      f.triangle_area() * f.grid_n() / f.domain_area();  // area / (h * k^2)
  grad.assign(static_cast<std::size_t>(side) * side * 2, 0.0);
  auto wrap = [side](int a) { return a < 0 ? a + side : (a >= side ? a - side : a); };
  auto lower_of = [side](int a, int b) { return 2ll * (static_cast<std::int64_t>(a) * side + b); };
  parallel_for(static_cast<std::int64_t>(side) * side, threads,
               [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t node = lo; node < hi; ++node) {
      const int i = static_cast<int>(node / side);
      const int j = static_cast<int>(node % side);
      const int im = wrap(i - 1), jm = wrap(j - 1);
      const std::int64_t t_low_ij = lower_of(i, j);
      const std::int64_t t_up_ij = t_low_ij + 1;
      const std::int64_t t_low_imj = lower_of(im, j);
      const std::int64_t t_low_imjm = lower_of(im, jm);
      const std::int64_t t_up_imjm = t_low_imjm + 1;
      const std::int64_t t_up_ijm = lower_of(i, jm) + 1;
      for (int comp = 0; comp < 2; ++comp) {
        // Column picks of the 2x2 stress: s1 = dW/dG(comp,1), s2 = dW/dG(comp,2).
        const int o1 = comp == 0 ? 0 : 2;
        const int o2 = comp == 0 ? 1 : 3;
        double acc = 0.0;
        acc -= stresses[4 * t_low_ij + o1];
        acc -= stresses[4 * t_up_ij + o2];
        acc += stresses[4 * t_low_imj + o1] - stresses[4 * t_low_imj + o2];
        acc += stresses[4 * t_low_imjm + o2];
        acc += stresses[4 * t_up_imjm + o1];
        acc += stresses[4 * t_up_ijm + o2] - stresses[4 * t_up_ijm + o1];
        grad[node * 2 + comp] = scale * acc;
      }
    }
  });
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Objective wrapper owning scratch buffers; the nodal vector is the unknown.
class Objective {
 public:
  Objective(const CellEnergy& ce, DisplacementField& f, int eps_denom,
            int threads)
      : f_(f),
        phase_(triangle_phases(ce, f, eps_denom)),
        energies_(f.triangle_count()),
        stresses_(4 * f.triangle_count()),
        threads_(threads) {}

  double eval(const std::vector<double>& w, std::vector<double>& grad) {
    f_.data() = w;
    per_triangle_pass(phase_, f_, energies_.data(), stresses_.data(), threads_);
    assemble_nodal_gradient(f_, stresses_, grad, threads_);
    return pairwise_sum(energies_.data(), energies_.size()) / f_.domain_area();
  }

  double eval_value(const std::vector<double>& w) {
    f_.data() = w;
    per_triangle_pass(phase_, f_, energies_.data(), nullptr, threads_);
    return pairwise_sum(energies_.data(), energies_.size()) / f_.domain_area();
  }

 private:
  DisplacementField& f_;
  std::vector<const EnergyDensity*> phase_;
  std::vector<double> energies_;
  std::vector<double> stresses_;
  int threads_;
};

}  // namespace

double discrete_energy(const CellEnergy& ce, const DisplacementField& f,
                       int eps_denom, int threads) {
  const auto phase = triangle_phases(ce, f, eps_denom);
  std::vector<double> energies(f.triangle_count());
  per_triangle_pass(phase, f, energies.data(), nullptr, threads);
  return pairwise_sum(energies.data(), energies.size()) / f.domain_area();
}

double discrete_energy_with_gradient(const CellEnergy& ce,
                                     const DisplacementField& f, int eps_denom,
                                     std::vector<double>& grad_out,
                                     int threads) {
  const auto phase = triangle_phases(ce, f, eps_denom);
  std::vector<double> energies(f.triangle_count());
  std::vector<double> stresses(4 * f.triangle_count());
  per_triangle_pass(phase, f, energies.data(), stresses.data(), threads);
  assemble_nodal_gradient(f, stresses, grad_out, threads);
  return pairwise_sum(energies.data(), energies.size()) / f.domain_area();
}

std::vector<double> discrete_energy_gradient(const CellEnergy& ce,
                                             const DisplacementField& f,
                                             int eps_denom, int threads) {
  std::vector<double> grad;
  discrete_energy_with_gradient(ce, f, eps_denom, grad, threads);
  return grad;
}

CellProblemResult cell_problem_minimize(const CellEnergy& ce, const Mat2& A,
                                        int N, int k, const SolverOptions& opts,
                                        const DisplacementField* initial) {
  if (N < 2 || N % 2 != 0)
    throw std::invalid_argument(
        "cell_problem_minimize: N must be even so the phase boundary lies on "
        "grid lines");
  if (k < 1) throw std::invalid_argument("cell_problem_minimize: k must be >= 1");
  if (initial) {
    if (initial->grid_n() != N || initial->periods() != k)
      throw std::invalid_argument("cell_problem_minimize: initial field has wrong grid");
    if (frobenius_dist(initial->mean(), A) > 1e-12)
      throw std::invalid_argument("cell_problem_minimize: initial field mean != A");
  }

  CellProblemResult res{0.0, initial ? *initial : DisplacementField(N, k, A),
                        0, false, 0.0};
  res.field.set_mean(A);
  Objective obj(ce, res.field, /*eps_denom=*/1, opts.threads);

  std::vector<double> w = res.field.data();
  std::vector<double> g, g_new, w_new(w.size()), d(w.size());
  double e = obj.eval(w, g);

  // L-BFGS history.
  std::deque<std::vector<double>> hist_s, hist_y;
  std::deque<double> hist_rho;
  std::vector<double> alpha;

  double step_init = 1.0;
  const bool use_lbfgs = opts.method == SolverOptions::Method::LBFGS;

  int iter = 0;
  for (; iter < opts.max_iterations; ++iter) {
    const double gnorm = max_abs(g);
    if (gnorm <= opts.grad_tol) {
      res.converged = true;
      break;
    }

    // Search direction.
    if (use_lbfgs && !hist_s.empty()) {
      d = g;
      const std::size_t hn = hist_s.size();
      alpha.assign(hn, 0.0);
      for (std::size_t r = 0; r < hn; ++r) {
        const std::size_t i = hn - 1 - r;  // newest first
        alpha[i] = hist_rho[i] * dot(hist_s[i], d);
        for (std::size_t c = 0; c < d.size(); ++c) d[c] -= alpha[i] * hist_y[i][c];
      }
      const double gamma =
          1.0 / (hist_rho.back() * dot(hist_y.back(), hist_y.back()));
      for (double& c : d) c *= gamma;
      for (std::size_t i = 0; i < hn; ++i) {
        const double beta = hist_rho[i] * dot(hist_y[i], d);
        for (std::size_t c = 0; c < d.size(); ++c)
          d[c] += (alpha[i] - beta) * hist_s[i][c];
      }
      for (double& c : d) c = -c;
    } else {
      for (std::size_t c = 0; c < d.size(); ++c) d[c] = -g[c];
    }

    double slope = dot(g, d);
    if (!(slope < 0.0)) {  // not a descent direction; fall back to steepest
      for (std::size_t c = 0; c < d.size(); ++c) d[c] = -g[c];
      slope = -dot(g, g);
    }

    // Armijo backtracking.
    double t = use_lbfgs ? 1.0 : step_init;
    double e_new = 0.0;
    bool accepted = false;
    while (t >= 1e-20) {
      for (std::size_t c = 0; c < w.size(); ++c) w_new[c] = w[c] + t * d[c];
      e_new = obj.eval(w_new, g_new);
      if (e_new <= e + opts.armijo_c * t * slope) {
        accepted = true;
        break;
      }
      t *= opts.backtrack;
    }
    if (!accepted) break;  // line search stalled at roundoff scale

    if (use_lbfgs) {
      std::vector<double> s(w.size()), y(w.size());
      for (std::size_t c = 0; c < w.size(); ++c) {
        s[c] = w_new[c] - w[c];
        y[c] = g_new[c] - g[c];
      }
      const double sy = dot(s, y);
      if (sy > 1e-12 * std::sqrt(dot(s, s)) * std::sqrt(dot(y, y))) {
        hist_s.push_back(std::move(s));
        hist_y.push_back(std::move(y));
        hist_rho.push_back(1.0 / sy);
        if (static_cast<int>(hist_s.size()) > opts.lbfgs_memory) {
          hist_s.pop_front();
          hist_y.pop_front();
          hist_rho.pop_front();
        }
      }
    } else {
      step_init = std::min(2.0 * t, 1e6);
    }

    w.swap(w_new);
    g.swap(g_new);
    e = e_new;
  }

  if (iter == opts.max_iterations) res.converged = max_abs(g) <= opts.grad_tol;
  res.iterations = iter;
  res.estimate = e;
  res.grad_norm = max_abs(g);
  res.field.data() = w;
  return res;
}

}  // namespace polyhom
