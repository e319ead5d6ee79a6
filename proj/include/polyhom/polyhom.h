/* polyhom: polyconvexity and periodic-homogenization toolkit, C API.
 *
 * Conventions:
 *   - 2x2 matrices travel as double[4] in row-major order a11, a12, a21, a22.
 *   - Every function returns a polyhom_status; outputs go through pointers.
 *   - On POLYHOM_ERR_* the thread-local message polyhom_last_error() is set.
 *   - Objects behind opaque handles must be released with their _destroy
 *     function; handles are not thread-safe unless stated.
 */
#ifndef POLYHOM_H
#define POLYHOM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined _WIN32
#define POLYHOM_API __declspec(dllexport)
#else
#define POLYHOM_API __attribute__((visibility("default")))
#endif

typedef enum polyhom_status {
  POLYHOM_OK = 0,
  POLYHOM_ERR_INVALID = 1, /* bad argument or precondition violation */
  POLYHOM_ERR_RUNTIME = 2  /* I/O or internal failure */
} polyhom_status;

/* Message for the most recent error on this thread; never NULL. */
POLYHOM_API const char* polyhom_last_error(void);

POLYHOM_API const char* polyhom_version(void);

/* ---- hull operations ------------------------------------------------- */

/* diag(b1(t), b2(t)), the curved part of the hull of the averages set;
 * t in [0,1]. */
POLYHOM_API polyhom_status polyhom_b_arc(double t, double out[4]);

/* Verdict for a three-matrix set (mats = 3 contiguous matrices): out_verdict
 * is 1 when the hull adds no points, 0 otherwise; out_dets receives the three
 * pairwise determinants (01, 02, 12). */
POLYHOM_API polyhom_status polyhom_polyconvex_verdict(const double mats[12],
                                                      double tol,
                                                      int* out_verdict,
                                                      double out_dets[3]);

/* Hull membership of m in the hull of a three-matrix set. out_accepted is
 * 1/0; on acceptance out_weights and out_residual describe the certificate
 * (residual = max of the affine and determinant-constraint residuals). */
POLYHOM_API polyhom_status polyhom_pc_membership(const double mats[12],
                                                 const double m[4], double tol,
                                                 int* out_accepted,
                                                 double out_weights[3],
                                                 double* out_residual);

/* ---- energy densities ------------------------------------------------- */

typedef struct polyhom_energy polyhom_energy;

/* Energy vanishing exactly on the generator set (n_gens matrices, 1..8),
 * growing like distance^p; p >= 2. */
POLYHOM_API polyhom_status polyhom_energy_create_zero_set(
    const double* gens, int n_gens, double p, polyhom_energy** out);

/* Convex energy dist^p(m, conv(generators)). */
POLYHOM_API polyhom_status polyhom_energy_create_hull_distance(
    const double* gens, int n_gens, double p, polyhom_energy** out);

POLYHOM_API polyhom_status polyhom_energy_value(const polyhom_energy* e,
                                                const double m[4],
                                                double* out);
POLYHOM_API polyhom_status polyhom_energy_gradient(const polyhom_energy* e,
                                                   const double m[4],
                                                   double out[4]);
POLYHOM_API void polyhom_energy_destroy(polyhom_energy* e);

/* ---- the two-phase composite ------------------------------------------ */

typedef struct polyhom_cell_energy polyhom_cell_energy;

/* The built-in composite: phase 1 on [0,1/2) x [0,1), phase 2 on the rest,
 * with the reference generator sets. convex_phase2 != 0 selects the variant
 * whose second phase is the convex hull-distance energy. */
POLYHOM_API polyhom_status polyhom_cell_energy_create(
    double p, int convex_phase2, polyhom_cell_energy** out);

/* Density value at unit-cell position (y1, y2) in [0,1)^2 and matrix m. */
POLYHOM_API polyhom_status polyhom_cell_energy_value(
    const polyhom_cell_energy* ce, double y1, double y2, const double m[4],
    double* out);

POLYHOM_API void polyhom_cell_energy_destroy(polyhom_cell_energy* ce);

/* ---- displacement fields ---------------------------------------------- */

typedef struct polyhom_field polyhom_field;

/* Zero periodic displacement on an N-per-cell grid with k period copies and
 * the given mean gradient. N >= 2, k >= 1. */
POLYHOM_API polyhom_status polyhom_field_create(int N, int k,
                                                const double mean[4],
                                                polyhom_field** out);

/* Exact laminate: gradient m1 where frac(x1 * eps_denom) < 1/2, m2 elsewhere;
 * m1 - m2 must have a zero second column and the grid must align
 * (N divisible by 2 * eps_denom). */
POLYHOM_API polyhom_status polyhom_field_create_laminate(
    const double m1[4], const double m2[4], int eps_denom, int N, int k,
    polyhom_field** out);

POLYHOM_API polyhom_status polyhom_field_mean(const polyhom_field* f,
                                              double out[4]);
POLYHOM_API polyhom_status polyhom_field_mean_gradient(const polyhom_field* f,
                                                       double out[4]);
POLYHOM_API polyhom_status polyhom_field_triangle_count(const polyhom_field* f,
                                                        int64_t* out);
/* Gradient of one triangle; tri in [0, triangle_count). */
POLYHOM_API polyhom_status polyhom_field_gradient(const polyhom_field* f,
                                                  int64_t tri, double out[4]);

/* Subtracts the reference sawtooth profile (the shifted-sequence transform);
 * the result's gradients drop by diag(-2,1) on phase-1 triangles and
 * diag(3,1) on phase-2 triangles. */
POLYHOM_API polyhom_status polyhom_field_shift_transform(
    const polyhom_field* f, int eps_denom, polyhom_field** out);

/* Adds `magnitude` to the first displacement component of deterministically
 * seeded nodes until ~target_fraction of triangles are touched; returns the
 * achieved fraction. */
POLYHOM_API polyhom_status polyhom_field_corrupt(polyhom_field* f,
                                                 double target_fraction,
                                                 double magnitude,
                                                 uint64_t seed,
                                                 double* out_achieved);

/* Text serialization: header "N k", then one "i j u1 u2" line per node. The
 * mean gradient is not stored and must be supplied on load. */
POLYHOM_API polyhom_status polyhom_field_save(const polyhom_field* f,
                                              const char* path);
POLYHOM_API polyhom_status polyhom_field_load(const char* path,
                                              const double mean[4],
                                              polyhom_field** out);

POLYHOM_API void polyhom_field_destroy(polyhom_field* f);

/* ---- discrete cell problem -------------------------------------------- */

/* Mean of ce(frac(centroid * eps_denom), gradient) over the field's
 * triangles, area-weighted. */
POLYHOM_API polyhom_status polyhom_discrete_energy(
    const polyhom_cell_energy* ce, const polyhom_field* f, int eps_denom,
    int threads, double* out);

typedef enum polyhom_method {
  POLYHOM_METHOD_GD = 0,   /* gradient descent with backtracking */
  POLYHOM_METHOD_LBFGS = 1 /* limited-memory quasi-Newton */
} polyhom_method;

/* Minimizes the discrete cell energy at mean A over periodic perturbations
 * on an N x N grid with k period copies (eps = 1). initial may be NULL
 * (zero start) or a field with matching N, k, and mean. minimizer_out may be
 * NULL when only the value is wanted. */
POLYHOM_API polyhom_status polyhom_cell_minimize(
    const polyhom_cell_energy* ce, const double A[4], int N, int k,
    int max_iterations, double grad_tol, polyhom_method method, int threads,
    const polyhom_field* initial, double* out_estimate, int* out_iterations,
    int* out_converged, polyhom_field** minimizer_out);

/* ---- membership certificates ------------------------------------------ */

typedef enum polyhom_membership_tag {
  POLYHOM_MEMBER_CERTIFIED = 0, /* zero-energy witness found */
  POLYHOM_MEMBER_EXCLUDED = 1,  /* shift test proves positivity */
  POLYHOM_MEMBER_UNKNOWN = 2
} polyhom_membership_tag;

POLYHOM_API const char* polyhom_membership_tag_name(polyhom_membership_tag t);

/* Shift test alone: excluded = 1 iff sym(A) - diag(1/2,1) is positive
 * definite; out_margins receives its leading entry and determinant. */
POLYHOM_API polyhom_status polyhom_exclusion_test(const double A[4],
                                                  int* out_excluded,
                                                  double out_margins[2]);

/* Full pipeline: exclusion, analytic witnesses, then the solver. out_tag is
 * the verdict; out_estimate the witness (or best) energy. */
POLYHOM_API polyhom_status polyhom_membership_certify(
    const polyhom_cell_energy* ce, const double A[4], int N, int k,
    double zero_tol, int max_iterations, double grad_tol,
    polyhom_method method, int threads, int* out_tag, double* out_estimate);

/* ---- two-scale diagnostics --------------------------------------------- */

/* Exact |integral of chi_U(x) chi_V(frac(x/eps)) - |U||V|| per eps = 1/m.
 * Rectangles are (x1lo, x1hi, x2lo, x2hi) inside the unit square; errors_out
 * must hold n_eps doubles. */
POLYHOM_API polyhom_status polyhom_riemann_lebesgue(const double u_rect[4],
                                                    const double v_rect[4],
                                                    const int* eps_denoms,
                                                    int n_eps,
                                                    double* errors_out);

/* ---- batch commands ----------------------------------------------------- */

/* Runs one command ("hulls", "counterexample", "homogenize", "two-scale")
 * with the key=value config at config_path (NULL or "" for defaults), writing
 * report files under out_dir. variant overrides the config's variant when
 * non-NULL and nonempty; threads overrides when > 0. out_exit_code receives
 * the process-style result: 0 ok, 2 config error, 3 numerical
 * non-reproduction. When text_out is non-NULL it receives the report text
 * (malloc'd; free with polyhom_string_free), including diagnostics for
 * nonzero exit codes. */
POLYHOM_API polyhom_status polyhom_run(const char* command,
                                       const char* config_path,
                                       const char* out_dir,
                                       const char* variant, int threads,
                                       int* out_exit_code, char** text_out);

POLYHOM_API void polyhom_string_free(char* s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* POLYHOM_H */
