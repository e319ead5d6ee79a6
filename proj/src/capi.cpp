#include "polyhom/polyhom.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "cell_problem.hpp"
#include "config.hpp"
#include "energies.hpp"
#include "field.hpp"
#include "hulls.hpp"
#include "measure.hpp"
#include "membership.hpp"
#include "reports.hpp"

using namespace polyhom;

struct polyhom_energy {
  std::shared_ptr<EnergyDensity> impl;
};
struct polyhom_cell_energy {
  CellEnergy impl;
};
struct polyhom_field {
  DisplacementField impl;
};

namespace {

thread_local std::string g_last_error = "no error";

polyhom_status fail(polyhom_status s, const char* what) {
  g_last_error = what;
  return s;
}

// Uniform exception-to-status translation for every API entry point.
template <typename Fn>
polyhom_status guarded(Fn&& fn) {
  try {
    fn();
    return POLYHOM_OK;
  } catch (const std::invalid_argument& e) {
    return fail(POLYHOM_ERR_INVALID, e.what());
  } catch (const config_error& e) {
    return fail(POLYHOM_ERR_INVALID, e.what());
  } catch (const std::bad_alloc&) {
    return fail(POLYHOM_ERR_RUNTIME, "out of memory");
  } catch (const std::exception& e) {
    return fail(POLYHOM_ERR_RUNTIME, e.what());
  }
}

polyhom_status require(bool ok, const char* what) {
  return ok ? POLYHOM_OK : fail(POLYHOM_ERR_INVALID, what);
}

Mat2 to_mat(const double m[4]) { return Mat2{m[0], m[1], m[2], m[3]}; }

void from_mat(const Mat2& m, double out[4]) {
  out[0] = m.a11;
  out[1] = m.a12;
  out[2] = m.a21;
  out[3] = m.a22;
}

Triple to_triple(const double mats[12]) {
  return Triple{to_mat(mats), to_mat(mats + 4), to_mat(mats + 8)};
}

MatrixSet to_set(const double* gens, int n_gens) {
  std::vector<Mat2> elems;
  elems.reserve(static_cast<std::size_t>(n_gens));
  for (int i = 0; i < n_gens; ++i) elems.push_back(to_mat(gens + 4 * i));
  return make_set(std::move(elems));
}

SolverOptions to_solver(int max_iterations, double grad_tol,
                        polyhom_method method, int threads) {
  SolverOptions o;
  o.max_iterations = max_iterations;
  o.grad_tol = grad_tol;
  o.method = method == POLYHOM_METHOD_LBFGS
                 ? SolverOptions::Method::LBFGS
                 : SolverOptions::Method::GradientDescent;
  o.threads = threads;
  return o;
}

}  // namespace

extern "C" {

const char* polyhom_last_error(void) { return g_last_error.c_str(); }

const char* polyhom_version(void) { return "polyhom 1.0.0"; }

polyhom_status polyhom_b_arc(double t, double out[4]) {
  if (auto s = require(out != nullptr, "b_arc: out is NULL")) return s;
  return guarded([&] { from_mat(b_arc(t), out); });
}

polyhom_status polyhom_polyconvex_verdict(const double mats[12], double tol,
                                          int* out_verdict,
                                          double out_dets[3]) {
  if (auto s = require(mats && out_verdict, "polyconvex_verdict: NULL argument"))
    return s;
  return guarded([&] {
    const Triple tr = to_triple(mats);
    *out_verdict = is_polyconvex_set(tr, tol) ? 1 : 0;
    if (out_dets) {
      out_dets[0] = det(tr[0] - tr[1]);
      out_dets[1] = det(tr[0] - tr[2]);
      out_dets[2] = det(tr[1] - tr[2]);
    }
  });
}

polyhom_status polyhom_pc_membership(const double mats[12], const double m[4],
                                     double tol, int* out_accepted,
                                     double out_weights[3],
                                     double* out_residual) {
  if (auto s = require(mats && m && out_accepted, "pc_membership: NULL argument"))
    return s;
  return guarded([&] {
    const auto cert = pc_membership(to_triple(mats), to_mat(m), tol);
    *out_accepted = cert.has_value() ? 1 : 0;
    if (cert) {
      if (out_weights)
        for (int i = 0; i < 3; ++i) out_weights[i] = cert->weights[i];
      if (out_residual)
        *out_residual =
            std::max(cert->residual_affine, std::fabs(cert->residual_det));
    }
  });
}

polyhom_status polyhom_energy_create_zero_set(const double* gens, int n_gens,
                                              double p, polyhom_energy** out) {
  if (auto s = require(gens && out, "energy_create_zero_set: NULL argument"))
    return s;
  return guarded([&] {
    *out = new polyhom_energy{build_zero_set_energy(to_set(gens, n_gens), p)};
  });
}

polyhom_status polyhom_energy_create_hull_distance(const double* gens,
                                                   int n_gens, double p,
                                                   polyhom_energy** out) {
  if (auto s =
          require(gens && out, "energy_create_hull_distance: NULL argument"))
    return s;
  return guarded([&] {
    *out = new polyhom_energy{
        convex_hull_distance_energy(to_set(gens, n_gens), p)};
  });
}

polyhom_status polyhom_energy_value(const polyhom_energy* e, const double m[4],
                                    double* out) {
  if (auto s = require(e && m && out, "energy_value: NULL argument")) return s;
  return guarded([&] { *out = e->impl->value(to_mat(m)); });
}

polyhom_status polyhom_energy_gradient(const polyhom_energy* e,
                                       const double m[4], double out[4]) {
  if (auto s = require(e && m && out, "energy_gradient: NULL argument"))
    return s;
  return guarded([&] { from_mat(e->impl->gradient(to_mat(m)), out); });
}

void polyhom_energy_destroy(polyhom_energy* e) { delete e; }

polyhom_status polyhom_cell_energy_create(double p, int convex_phase2,
                                          polyhom_cell_energy** out) {
  if (auto s = require(out != nullptr, "cell_energy_create: out is NULL"))
    return s;
  return guarded([&] {
    *out = new polyhom_cell_energy{convex_phase2
                                       ? composite_cell_energy_convex_phase2(p)
                                       : composite_cell_energy(p)};
  });
}

polyhom_status polyhom_cell_energy_value(const polyhom_cell_energy* ce,
                                         double y1, double y2,
                                         const double m[4], double* out) {
  if (auto s = require(ce && m && out, "cell_energy_value: NULL argument"))
    return s;
  return guarded([&] { *out = ce->impl.value(y1, y2, to_mat(m)); });
}

void polyhom_cell_energy_destroy(polyhom_cell_energy* ce) { delete ce; }

polyhom_status polyhom_field_create(int N, int k, const double mean[4],
                                    polyhom_field** out) {
  if (auto s = require(mean && out, "field_create: NULL argument")) return s;
  return guarded(
      [&] { *out = new polyhom_field{DisplacementField(N, k, to_mat(mean))}; });
}

polyhom_status polyhom_field_create_laminate(const double m1[4],
                                             const double m2[4], int eps_denom,
                                             int N, int k,
                                             polyhom_field** out) {
  if (auto s = require(m1 && m2 && out, "field_create_laminate: NULL argument"))
    return s;
  return guarded([&] {
    *out = new polyhom_field{
        laminate_field(to_mat(m1), to_mat(m2), eps_denom, N, k)};
  });
}

polyhom_status polyhom_field_mean(const polyhom_field* f, double out[4]) {
  if (auto s = require(f && out, "field_mean: NULL argument")) return s;
  return guarded([&] { from_mat(f->impl.mean(), out); });
}

polyhom_status polyhom_field_mean_gradient(const polyhom_field* f,
                                           double out[4]) {
  if (auto s = require(f && out, "field_mean_gradient: NULL argument")) return s;
  return guarded([&] { from_mat(mean_gradient(f->impl), out); });
}

polyhom_status polyhom_field_triangle_count(const polyhom_field* f,
                                            int64_t* out) {
  if (auto s = require(f && out, "field_triangle_count: NULL argument"))
    return s;
  *out = f->impl.triangle_count();
  return POLYHOM_OK;
}

polyhom_status polyhom_field_gradient(const polyhom_field* f, int64_t tri,
                                      double out[4]) {
  if (auto s = require(f && out, "field_gradient: NULL argument")) return s;
  if (auto s = require(tri >= 0 && tri < f->impl.triangle_count(),
                       "field_gradient: triangle index out of range"))
    return s;
  return guarded([&] { from_mat(f->impl.gradient(tri), out); });
}

polyhom_status polyhom_field_shift_transform(const polyhom_field* f,
                                             int eps_denom,
                                             polyhom_field** out) {
  if (auto s = require(f && out, "field_shift_transform: NULL argument"))
    return s;
  return guarded(
      [&] { *out = new polyhom_field{shift_transform(f->impl, eps_denom)}; });
}

polyhom_status polyhom_field_corrupt(polyhom_field* f, double target_fraction,
                                     double magnitude, uint64_t seed,
                                     double* out_achieved) {
  if (auto s = require(f != nullptr, "field_corrupt: field is NULL")) return s;
  return guarded([&] {
    const double got = corrupt_field(f->impl, target_fraction, magnitude, seed);
    if (out_achieved) *out_achieved = got;
  });
}

polyhom_status polyhom_field_save(const polyhom_field* f, const char* path) {
  if (auto s = require(f && path, "field_save: NULL argument")) return s;
  return guarded([&] { save_field(f->impl, path); });
}

polyhom_status polyhom_field_load(const char* path, const double mean[4],
                                  polyhom_field** out) {
  if (auto s = require(path && mean && out, "field_load: NULL argument"))
    return s;
  return guarded(
      [&] { *out = new polyhom_field{load_field(path, to_mat(mean))}; });
}

void polyhom_field_destroy(polyhom_field* f) { delete f; }

polyhom_status polyhom_discrete_energy(const polyhom_cell_energy* ce,
                                       const polyhom_field* f, int eps_denom,
                                       int threads, double* out) {
  if (auto s = require(ce && f && out, "discrete_energy: NULL argument"))
    return s;
  return guarded(
      [&] { *out = discrete_energy(ce->impl, f->impl, eps_denom, threads); });
}

polyhom_status polyhom_cell_minimize(const polyhom_cell_energy* ce,
                                     const double A[4], int N, int k,
                                     int max_iterations, double grad_tol,
                                     polyhom_method method, int threads,
                                     const polyhom_field* initial,
                                     double* out_estimate, int* out_iterations,
                                     int* out_converged,
                                     polyhom_field** minimizer_out) {
  if (auto s = require(ce && A && out_estimate, "cell_minimize: NULL argument"))
    return s;
  return guarded([&] {
    const SolverOptions opts =
        to_solver(max_iterations, grad_tol, method, threads);
    CellProblemResult r = cell_problem_minimize(
        ce->impl, to_mat(A), N, k, opts, initial ? &initial->impl : nullptr);
    *out_estimate = r.estimate;
    if (out_iterations) *out_iterations = r.iterations;
    if (out_converged) *out_converged = r.converged ? 1 : 0;
    if (minimizer_out) *minimizer_out = new polyhom_field{std::move(r.field)};
  });
}

const char* polyhom_membership_tag_name(polyhom_membership_tag t) {
  switch (t) {
    case POLYHOM_MEMBER_CERTIFIED: return "CertifiedMember";
    case POLYHOM_MEMBER_EXCLUDED: return "ExcludedBySverak";
    case POLYHOM_MEMBER_UNKNOWN: return "Unknown";
  }
  return "?";
}

polyhom_status polyhom_exclusion_test(const double A[4], int* out_excluded,
                                      double out_margins[2]) {
  if (auto s = require(A && out_excluded, "exclusion_test: NULL argument"))
    return s;
  return guarded([&] {
    const MembershipVerdict v = sverak_exclusion_test(to_mat(A));
    *out_excluded = v.tag == MembershipTag::ExcludedBySverak ? 1 : 0;
    if (out_margins) {
      out_margins[0] = v.margin_leading;
      out_margins[1] = v.margin_det;
    }
  });
}

polyhom_status polyhom_membership_certify(const polyhom_cell_energy* ce,
                                          const double A[4], int N, int k,
                                          double zero_tol, int max_iterations,
                                          double grad_tol,
                                          polyhom_method method, int threads,
                                          int* out_tag, double* out_estimate) {
  if (auto s = require(ce && A && out_tag, "membership_certify: NULL argument"))
    return s;
  return guarded([&] {
    CertifyOptions opts;
    opts.N = N;
    opts.k = k;
    opts.zero_tol = zero_tol;
    opts.solver = to_solver(max_iterations, grad_tol, method, threads);
    const MembershipVerdict v = membership_certify(ce->impl, to_mat(A), opts);
    switch (v.tag) {
      case MembershipTag::CertifiedMember: *out_tag = POLYHOM_MEMBER_CERTIFIED; break;
      case MembershipTag::ExcludedBySverak: *out_tag = POLYHOM_MEMBER_EXCLUDED; break;
      case MembershipTag::Unknown: *out_tag = POLYHOM_MEMBER_UNKNOWN; break;
    }
    if (out_estimate) *out_estimate = v.estimate;
  });
}

polyhom_status polyhom_riemann_lebesgue(const double u_rect[4],
                                        const double v_rect[4],
                                        const int* eps_denoms, int n_eps,
                                        double* errors_out) {
  if (auto s = require(u_rect && v_rect && eps_denoms && errors_out && n_eps >= 0,
                       "riemann_lebesgue: NULL argument"))
    return s;
  return guarded([&] {
    const Rect u{u_rect[0], u_rect[1], u_rect[2], u_rect[3]};
    const Rect v{v_rect[0], v_rect[1], v_rect[2], v_rect[3]};
    const std::vector<int> ms(eps_denoms, eps_denoms + n_eps);
    const auto errors = riemann_lebesgue_check(u, v, ms);
    for (int i = 0; i < n_eps; ++i) errors_out[i] = errors[static_cast<std::size_t>(i)];
  });
}

polyhom_status polyhom_run(const char* command, const char* config_path,
                           const char* out_dir, const char* variant,
                           int threads, int* out_exit_code, char** text_out) {
  if (auto s = require(command && out_exit_code, "run: NULL argument")) return s;
  std::string text;
  int code = 0;
  const polyhom_status st = guarded([&] {
    RunConfig cfg;
    try {
      if (config_path && *config_path) cfg = parse_config_file(config_path);
      if (variant && *variant) {
        if (std::string(variant) != "standard" &&
            std::string(variant) != "convex-phase2")
          throw config_error("variant must be 'standard' or 'convex-phase2'");
        cfg.variant = variant;
      }
      if (threads > 0) cfg.threads = threads;
      const CommandResult r = run_command(
          command, cfg, out_dir && *out_dir ? out_dir : "polyhom_out");
      code = r.exit_code;
      text = r.text;
    } catch (const config_error& e) {
      code = 2;
      text = std::string("config error: ") + e.what() + "\n";
    } catch (const std::invalid_argument& e) {
      code = 2;
      text = std::string("config error: ") + e.what() + "\n";
    }
  });
  if (st != POLYHOM_OK) return st;
  *out_exit_code = code;
  if (text_out) {
    char* buf = static_cast<char*>(std::malloc(text.size() + 1));
    if (!buf) return fail(POLYHOM_ERR_RUNTIME, "out of memory");
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *text_out = buf;
  }
  return POLYHOM_OK;
}

void polyhom_string_free(char* s) { std::free(s); }

}  // extern "C"
