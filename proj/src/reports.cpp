#include "reports.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <json.hpp>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cell_problem.hpp"
#include "energies.hpp"
#include "field.hpp"
#include "hulls.hpp"
#include "measure.hpp"
#include "membership.hpp"

namespace polyhom {

namespace {

using nlohmann::json;

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt6(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

class CsvFile {
 public:
  CsvFile(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    path_ = dir + "/" + name;
    f_ = std::fopen(path_.c_str(), "wb");
    if (!f_) throw std::runtime_error("cannot open output file " + path_);
  }
  ~CsvFile() {
    if (f_) std::fclose(f_);
  }
  CsvFile(const CsvFile&) = delete;
  CsvFile& operator=(const CsvFile&) = delete;

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      std::fprintf(f_, "%s%s", i ? "," : "", cells[i].c_str());
    std::fprintf(f_, "\n");
  }

 private:
  std::string path_;
  std::FILE* f_ = nullptr;
};

void write_json(const std::string& dir, const json& j) {
  std::filesystem::create_directories(dir);
  const std::string path = dir + "/summary.json";
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot open output file " + path);
  const std::string text = j.dump(2) + "\n";
  std::fwrite(text.data(), 1, text.size(), f);
  std::fclose(f);
}

json base_summary(const char* command, const RunConfig& cfg) {
  json j;
  j["schema"] = "polyhom-report/v1";
  j["command"] = command;
  j["p"] = cfg.p;
  j["variant"] = cfg.variant;
  j["seed"] = cfg.seed;
  return j;
}

Triple triple_of(const MatrixSet& s) {
  if (s.elems.size() != 3)
    throw std::invalid_argument("triple_of: expected a three-element set");
  return {s.elems[0], s.elems[1], s.elems[2]};
}

double wall_seconds(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

const char* passfail(bool b) { return b ? "true" : "false"; }

}  // namespace

CommandResult run_hulls(const RunConfig& cfg, const std::string& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream out;

  struct Row {
    const char* name;
    MatrixSet set;
  };
  const Row rows[3] = {{"A1", counterexample::phase1_set()},
                       {"A2", counterexample::phase2_set()},
                       {"B", counterexample::averages_set()}};

  json summary = base_summary("hulls", cfg);
  CsvFile sets_csv(out_dir, "sets.csv");
  sets_csv.row({"set", "polyconvex", "det_01", "det_02", "det_12"});
  out << "set  polyconvex  pairwise determinants\n";
  for (const Row& r : rows) {
    const Triple tr = triple_of(r.set);
    const bool pc = is_polyconvex_set(tr, cfg.residual_tol);
    const double d01 = det(tr[0] - tr[1]);
    const double d02 = det(tr[0] - tr[2]);
    const double d12 = det(tr[1] - tr[2]);
    sets_csv.row({r.name, passfail(pc), fmt17(d01), fmt17(d02), fmt17(d12)});
    summary["polyconvex"][r.name] = pc;
    out << r.name << "   " << passfail(pc) << "       " << fmt6(d01) << " "
        << fmt6(d02) << " " << fmt6(d12) << "\n";
  }

  // Arc samples certified against the averages triple.
  const Triple avg = triple_of(counterexample::averages_set());
  CsvFile arc_csv(out_dir, "arc_membership.csv");
  arc_csv.row({"t", "b1", "b2", "accepted", "residual", "w0", "w1", "w2"});
  double max_residual = 0.0;
  bool all_accepted = true;
  for (double t : cfg.t_samples) {
    const Mat2 m = b_arc(t);
    const auto cert = pc_membership(avg, m, cfg.residual_tol);
    const bool ok = cert.has_value();
    all_accepted = all_accepted && ok;
    const double res =
        ok ? std::max(cert->residual_affine, std::fabs(cert->residual_det))
           : -1.0;
    if (ok) max_residual = std::max(max_residual, res);
    arc_csv.row({fmt17(t), fmt17(m.a11), fmt17(m.a22), passfail(ok), fmt17(res),
                 fmt17(ok ? cert->weights[0] : 0.0),
                 fmt17(ok ? cert->weights[1] : 0.0),
                 fmt17(ok ? cert->weights[2] : 0.0)});
  }
  summary["arc_samples"] = cfg.t_samples.size();
  summary["arc_all_accepted"] = all_accepted;
  summary["arc_max_residual"] = max_residual;
  out << "arc samples accepted: " << passfail(all_accepted)
      << "  max residual: " << fmt6(max_residual) << "\n";

  // Plot data for the hull boundary curve, endpoints included.
  CsvFile plot_csv(out_dir, "arc_plot.csv");
  plot_csv.row({"b1", "b2"});
  const int n_plot = 100;
  for (int i = 0; i <= n_plot; ++i) {
    const Mat2 m = b_arc(static_cast<double>(i) / n_plot);
    plot_csv.row({fmt17(m.a11), fmt17(m.a22)});
  }

  write_json(out_dir, summary);
  out << "wall time: " << fmt6(wall_seconds(t0)) << " s\n";
  return {0, out.str()};
}

CommandResult run_counterexample(const RunConfig& cfg,
                                 const std::string& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream out;

  const CellEnergy ce = composite_for_variant(cfg);
  CertifyOptions opts;
  opts.N = cfg.N;
  opts.k = cfg.k;
  opts.zero_tol = cfg.zero_tol;
  opts.solver = solver_options(cfg);

  struct Point {
    std::string label;
    Mat2 m;
    bool arc;
  };
  std::vector<Point> points = {{"O", counterexample::zero_mat(), false},
                               {"B1", counterexample::average_a(), false},
                               {"B2", counterexample::average_b(), false}};
  for (double t : cfg.t_samples)
    points.push_back({"b_arc(" + fmt6(t) + ")", b_arc(t), true});

  CsvFile csv(out_dir, "verdicts.csv");
  csv.row({"point", "tag", "route", "estimate", "margin_leading", "margin_det",
           "solver_iterations", "solver_converged"});

  bool all_base_member = true;
  bool any_arc_excluded = false;
  json jrows = json::array();
  out << "point        verdict            route\n";
  for (const Point& pt : points) {
    const MembershipVerdict v = membership_certify(ce, pt.m, opts);
    const bool solver_route = v.route == CertificateRoute::Solver;
    if (!pt.arc)
      all_base_member =
          all_base_member && v.tag == MembershipTag::CertifiedMember;
    else
      any_arc_excluded =
          any_arc_excluded || v.tag == MembershipTag::ExcludedBySverak;
    csv.row({pt.label, to_string(v.tag), to_string(v.route), fmt17(v.estimate),
             fmt17(v.margin_leading), fmt17(v.margin_det),
             solver_route ? std::to_string(v.iterations) : "",
             solver_route ? passfail(v.solver_converged) : ""});
    json jr;
    jr["point"] = pt.label;
    jr["tag"] = to_string(v.tag);
    jr["route"] = to_string(v.route);
    jr["estimate"] = v.estimate;
    jrows.push_back(jr);
    out << pt.label << std::string(pt.label.size() < 13 ? 13 - pt.label.size() : 1, ' ')
        << to_string(v.tag) << std::string(19 - std::string(to_string(v.tag)).size(), ' ')
        << to_string(v.route) << "\n";
  }

  const bool reproduced = all_base_member && any_arc_excluded;
  json summary = base_summary("counterexample", cfg);
  summary["rows"] = jrows;
  summary["reproduced"] = reproduced;
  write_json(out_dir, summary);

  out << "wall time: " << fmt6(wall_seconds(t0)) << " s\n";
  out << "loss of polyconvexity reproduced: " << (reproduced ? "yes" : "no")
      << "\n";
  return {reproduced ? 0 : 3, out.str()};
}

namespace {

// Best available start for the cell problem at mean A: the zero field, or an
// exact two-generator laminate when A is a compatible midpoint.
DisplacementField initial_field(const CellEnergy& ce, const Mat2& A, int N,
                                int k, int threads) {
  DisplacementField best(N, k, A);
  double best_energy = discrete_energy(ce, best, 1, threads);
  const MatrixSet g1 = ce.phases[0]->generators();
  const MatrixSet g2 = ce.phases[1]->generators();
  for (const Mat2& a1 : g1.elems) {
    for (const Mat2& a2 : g2.elems) {
      const Mat2 d = a1 - a2;
      if (frobenius_dist(0.5 * (a1 + a2), A) > 1e-12) continue;
      if (d.a12 != 0.0 || d.a22 != 0.0) continue;
      DisplacementField lam = laminate_field(a1, a2, 1, N, k);
      const double e = discrete_energy(ce, lam, 1, threads);
      if (e < best_energy) {
        best = std::move(lam);
        best_energy = e;
      }
    }
  }
  return best;
}

}  // namespace

CommandResult run_homogenize(const RunConfig& cfg, const std::string& out_dir) {
  std::ostringstream out;
  const Mat2 A = parse_matrix_spec(cfg.matrix_a);
  const CellEnergy ce = composite_for_variant(cfg);
  const SolverOptions opts = solver_options(cfg);

  CsvFile csv(out_dir, "estimates.csv");
  csv.row({"N", "k", "estimate", "iterations", "converged"});
  json jrows = json::array();
  bool all_converged = true;

  out << "A = [" << fmt6(A.a11) << " " << fmt6(A.a12) << "; " << fmt6(A.a21)
      << " " << fmt6(A.a22) << "]\n";
  out << "N    k    estimate        iterations  wall(s)\n";
  for (int N : cfg.n_list) {
    DisplacementField warm(2, 1, A);  // placeholder until the first solve
    bool have_warm = false;
    int warm_k = 0;
    for (int k : cfg.k_list) {
      const auto t0 = std::chrono::steady_clock::now();
      DisplacementField start(N, k, A);
      if (have_warm && k >= warm_k && k % warm_k == 0)
        start = k == warm_k ? warm : tile_field(warm, k);
      else
        start = initial_field(ce, A, N, k, cfg.threads);
      const CellProblemResult r =
          cell_problem_minimize(ce, A, N, k, opts, &start);
      all_converged = all_converged && r.converged;
      csv.row({std::to_string(N), std::to_string(k), fmt17(r.estimate),
               std::to_string(r.iterations), passfail(r.converged)});
      save_field(r.field, out_dir + "/minimizer_N" + std::to_string(N) + "_k" +
                              std::to_string(k) + ".txt");
      json jr;
      jr["N"] = N;
      jr["k"] = k;
      jr["estimate"] = r.estimate;
      jr["iterations"] = r.iterations;
      jr["converged"] = r.converged;
      jrows.push_back(jr);
      out << N << (N < 100 ? "   " : "  ") << k << "    " << fmt17(r.estimate)
          << "  " << r.iterations << "  " << fmt6(wall_seconds(t0)) << "\n";
      warm = r.field;
      have_warm = true;
      warm_k = k;
    }
  }

  json summary = base_summary("homogenize", cfg);
  summary["matrix_a"] = cfg.matrix_a;
  summary["rows"] = jrows;
  summary["all_converged"] = all_converged;
  write_json(out_dir, summary);
  return {all_converged ? 0 : 3, out.str()};
}

CommandResult run_two_scale(const RunConfig& cfg, const std::string& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream out;

  const auto errors =
      riemann_lebesgue_check(cfg.rl_u, cfg.rl_v, cfg.eps_denoms);
  CsvFile rl_csv(out_dir, "rl_errors.csv");
  rl_csv.row({"eps", "error"});
  out << "eps        RL error\n";
  for (std::size_t i = 0; i < errors.size(); ++i) {
    const double eps = 1.0 / cfg.eps_denoms[i];
    rl_csv.row({fmt17(eps), fmt17(errors[i])});
    out << "1/" << cfg.eps_denoms[i] << "       " << fmt6(errors[i]) << "\n";
  }

  // Support checks: an exact laminate and a corrupted copy of it.
  const PartitionSpec partition = vertical_halves();
  const std::vector<MatrixSet> sets = {counterexample::phase1_set(),
                                       counterexample::phase2_set()};
  DisplacementField laminate =
      laminate_field(counterexample::phase1_a(), counterexample::phase2_a(),
                     cfg.support_eps_denom, cfg.N, cfg.k);
  DisplacementField corrupted = laminate;
  const double achieved = corrupt_field(corrupted, cfg.corrupt_fraction,
                                        cfg.corrupt_magnitude, cfg.seed);

  CsvFile sup_csv(out_dir, "support.csv");
  sup_csv.row({"field", "pass", "escaped_mass", "pointwise_fraction"});
  json jsup = json::array();
  out << "field      pass   escaped mass\n";
  const std::pair<const char*, const DisplacementField*> fields[2] = {
      {"laminate", &laminate}, {"corrupted", &corrupted}};
  for (const auto& [label, field] : fields) {
    const auto m = empirical_two_scale_measure(*field, cfg.support_eps_denom,
                                               cfg.y_bins, cfg.lambda_bins);
    const auto chk = support_check(m, partition, sets, cfg.support_tol);
    const double pw = escaped_fraction_pointwise(
        *field, cfg.support_eps_denom, partition, sets, cfg.support_tol);
    sup_csv.row({label, passfail(chk.pass), fmt17(chk.escaped_mass), fmt17(pw)});
    json jr;
    jr["field"] = label;
    jr["pass"] = chk.pass;
    jr["escaped_mass"] = chk.escaped_mass;
    jr["pointwise_fraction"] = pw;
    jsup.push_back(jr);
    out << label << (std::string(label) == "laminate" ? "   " : "  ")
        << passfail(chk.pass) << "   " << fmt6(chk.escaped_mass) << "\n";
  }

  json summary = base_summary("two-scale", cfg);
  summary["rl_errors"] = errors;
  summary["support"] = jsup;
  summary["achieved_corruption"] = achieved;
  write_json(out_dir, summary);
  out << "wall time: " << fmt6(wall_seconds(t0)) << " s\n";
  return {0, out.str()};
}

CommandResult run_command(const std::string& command, const RunConfig& cfg,
                          const std::string& out_dir) {
  if (command == "hulls") return run_hulls(cfg, out_dir);
  if (command == "counterexample") return run_counterexample(cfg, out_dir);
  if (command == "homogenize") return run_homogenize(cfg, out_dir);
  if (command == "two-scale") return run_two_scale(cfg, out_dir);
  throw config_error("unknown command '" + command + "'");
}

}  // namespace polyhom
