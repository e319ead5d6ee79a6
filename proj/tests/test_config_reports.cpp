#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "mat2.hpp"
#include "reports.hpp"

using namespace polyhom;
namespace fs = std::filesystem;

namespace {

std::string fresh_dir(const std::string& name) {
  const std::string dir = "/tmp/polyhom_report_test/" + name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("empty config yields the documented defaults") {
  const RunConfig cfg = parse_config_text("");
  CHECK(cfg.p == 4.0);
  CHECK(cfg.N == 16);
  CHECK(cfg.k == 1);
  CHECK(cfg.n_list == std::vector<int>{16, 32});
  CHECK(cfg.k_list == std::vector<int>{1, 2});
  CHECK(cfg.eps_denoms == std::vector<int>{2, 4, 8, 16});
  CHECK(cfg.t_samples.size() == 9);
  CHECK(cfg.zero_tol == 1e-8);
  CHECK(cfg.residual_tol == 1e-9);
  CHECK(cfg.support_tol == 1e-6);
  CHECK(cfg.seed == 0);
  CHECK(cfg.threads == 1);
  CHECK(cfg.matrix_a == "b_arc:0.5");
  CHECK(cfg.y_bins == 10);
  CHECK(cfg.lambda_bins.lo == -5.0);
  CHECK(cfg.lambda_bins.hi == 5.0);
  CHECK(cfg.lambda_bins.n == 20);
  CHECK(cfg.support_eps_denom == 4);
  CHECK(cfg.corrupt_fraction == 0.01);
  CHECK(cfg.corrupt_magnitude == 1.0);
  CHECK(cfg.max_iterations == 100000);
  CHECK(cfg.grad_tol == 1e-9);
  CHECK(cfg.method == "gd");
  CHECK(cfg.variant == "standard");
  CHECK(cfg.rl_u.x1hi == 0.7);
  CHECK(cfg.rl_v.x1hi == 0.5);
}

TEST_CASE("every key parses and comments are ignored") {
  const RunConfig cfg = parse_config_text(
      "# full configuration\n"
      "p = 2\n"
      "N = 8            # trailing comment\n"
      "k = 2\n"
      "n_list = 8, 12\n"
      "k_list = 1\n"
      "eps_list = 1/2, 1/8\n"
      "t_samples = 0.25, 0.75\n"
      "zero_tol = 1e-7\n"
      "residual_tol = 1e-8\n"
      "support_tol = 1e-5\n"
      "seed = 42\n"
      "threads = 3\n"
      "matrix_a = B2\n"
      "y_bins = 5\n"
      "lambda_lo = -4\n"
      "lambda_hi = 4\n"
      "lambda_bins = 16\n"
      "support_eps = 2\n"
      "corrupt_fraction = 0.02\n"
      "corrupt_magnitude = 2.5\n"
      "max_iterations = 500\n"
      "grad_tol = 1e-8\n"
      "method = lbfgs\n"
      "variant = convex-phase2\n"
      "rl_u = 0, 0.6, 0, 1\n"
      "rl_v = 0.25, 0.75, 0, 1\n");
  CHECK(cfg.p == 2.0);
  CHECK(cfg.N == 8);
  CHECK(cfg.k == 2);
  CHECK(cfg.n_list == std::vector<int>{8, 12});
  CHECK(cfg.k_list == std::vector<int>{1});
  CHECK(cfg.eps_denoms == std::vector<int>{2, 8});
  CHECK(cfg.t_samples == std::vector<double>{0.25, 0.75});
  CHECK(cfg.zero_tol == 1e-7);
  CHECK(cfg.residual_tol == 1e-8);
  CHECK(cfg.support_tol == 1e-5);
  CHECK(cfg.seed == 42);
  CHECK(cfg.threads == 3);
  CHECK(cfg.matrix_a == "B2");
  CHECK(cfg.y_bins == 5);
  CHECK(cfg.lambda_bins.lo == -4.0);
  CHECK(cfg.lambda_bins.hi == 4.0);
  CHECK(cfg.lambda_bins.n == 16);
  CHECK(cfg.support_eps_denom == 2);
  CHECK(cfg.corrupt_fraction == 0.02);
  CHECK(cfg.corrupt_magnitude == 2.5);
  CHECK(cfg.max_iterations == 500);
  CHECK(cfg.grad_tol == 1e-8);
  CHECK(cfg.method == "lbfgs");
  CHECK(cfg.variant == "convex-phase2");
  CHECK(cfg.rl_u.x1hi == 0.6);
  CHECK(cfg.rl_v.x1lo == 0.25);

  // The eps forms "1/m" and bare "m" are interchangeable.
  CHECK(parse_config_text("eps_list = 1/4\n").eps_denoms ==
        parse_config_text("eps_list = 4\n").eps_denoms);
}

TEST_CASE("malformed configurations are rejected with context") {
  CHECK_THROWS_AS(parse_config_text("nonsense_key = 3\n"), config_error);
  CHECK_THROWS_AS(parse_config_text("p 4\n"), config_error);
  CHECK_THROWS_AS(parse_config_text("p = not_a_number\n"), config_error);
  CHECK_THROWS_AS(parse_config_text("N = 7\n"), config_error);
  CHECK_THROWS_AS(parse_config_text("N = 2\n"), config_error);
  CHECK_THROWS_AS(parse_config_text("n_list = 8, 9\n"), config_error);
  CHECK_THROWS_AS(parse_config_text("k_list = 0\n"), config_error);
  CHECK_THROWS_AS(parse_config_text("eps_list = 1/0\n"), config_error);
  CHECK_THROWS_AS(parse_config_text("t_samples = 1.5\n"), config_error);
  CHECK_THROWS_AS(parse_config_text("zero_tol = 0\n"), config_error);
  CHECK_THROWS_AS(parse_config_text("threads = 0\n"), config_error);
  CHECK_THROWS_AS(parse_config_text("lambda_lo = 6\n"), config_error);
  CHECK_THROWS_AS(parse_config_text("corrupt_fraction = 0.6\n"), config_error);
  CHECK_THROWS_AS(parse_config_text("max_iterations = 0\n"), config_error);
  CHECK_THROWS_AS(parse_config_text("method = newton\n"), config_error);
  CHECK_THROWS_AS(parse_config_text("variant = both\n"), config_error);
  CHECK_THROWS_AS(parse_config_text("rl_u = 0, 1\n"), config_error);
  CHECK_THROWS_AS(parse_config_text("rl_u = 0.5, 0.2, 0, 1\n"), config_error);

  // Line numbers appear in parse errors.
  try {
    parse_config_text("p = 4\nmystery = 1\n");
    FAIL("expected config_error");
  } catch (const config_error& e) {
    CHECK(contains(e.what(), "line 2"));
    CHECK(contains(e.what(), "mystery"));
  }

  CHECK_THROWS_AS(parse_config_file("/tmp/polyhom_no_such_config.cfg"),
                  config_error);
}

TEST_CASE("matrix specs") {
  CHECK(parse_matrix_spec("O") == counterexample::zero_mat());
  CHECK(parse_matrix_spec("B1") == counterexample::average_a());
  CHECK(parse_matrix_spec("B2") == counterexample::average_b());
  const Mat2 arc = parse_matrix_spec("b_arc:0.5");
  CHECK(arc.a11 == doctest::Approx(0.6403882032022076).epsilon(1e-15));
  const Mat2 raw = parse_matrix_spec("1, 2, 3, 4");
  CHECK(raw == Mat2{1.0, 2.0, 3.0, 4.0});

  CHECK_THROWS_AS(parse_matrix_spec("Q"), config_error);
  CHECK_THROWS_AS(parse_matrix_spec("b_arc:1.5"), config_error);
  CHECK_THROWS_AS(parse_matrix_spec("1, 2, 3"), config_error);
  CHECK_THROWS_AS(parse_matrix_spec("1, 2, 3, x"), config_error);
}

TEST_CASE("solver options and composite follow the config") {
  RunConfig cfg = parse_config_text("method = lbfgs\nmax_iterations = 17\n");
  const SolverOptions opts = solver_options(cfg);
  CHECK(opts.method == SolverOptions::Method::LBFGS);
  CHECK(opts.max_iterations == 17);
  CHECK(solver_options(parse_config_text("")).method ==
        SolverOptions::Method::GradientDescent);

  // The variant changes the second phase on its hull interior only.
  const Mat2 mid =
      0.5 * (counterexample::phase2_a() + counterexample::phase2_b());
  cfg.variant = "standard";
  CHECK(composite_for_variant(cfg).value(0.75, 0.5, mid) > 0.0);
  cfg.variant = "convex-phase2";
  CHECK(composite_for_variant(cfg).value(0.75, 0.5, mid) <= 1e-20);
}

TEST_CASE("hulls report") {
  const std::string dir = fresh_dir("hulls");
  const RunConfig cfg = parse_config_text("");
  const CommandResult r = run_hulls(cfg, dir);
  CHECK(r.exit_code == 0);
  CHECK(contains(r.text, "wall time"));

  const auto sets = lines_of(slurp(dir + "/sets.csv"));
  REQUIRE(sets.size() == 4);
  CHECK(sets[0] == "set,polyconvex,det_01,det_02,det_12");
  CHECK(contains(sets[1], "A1,true"));
  CHECK(contains(sets[1], "-0.5"));
  CHECK(contains(sets[2], "A2,true"));
  CHECK(contains(sets[3], "B,false"));

  const auto arc = lines_of(slurp(dir + "/arc_membership.csv"));
  REQUIRE(arc.size() == 1 + cfg.t_samples.size());
  for (std::size_t i = 1; i < arc.size(); ++i) CHECK(contains(arc[i], ",true,"));

  const auto plot = lines_of(slurp(dir + "/arc_plot.csv"));
  REQUIRE(plot.size() == 102);  // header + endpoints + 99 interior samples
  CHECK(plot[1] == "1,1");
  CHECK(plot[101] == "0.5,2");

  const auto summary = nlohmann::json::parse(slurp(dir + "/summary.json"));
  CHECK(summary["schema"] == "polyhom-report/v1");
  CHECK(summary["command"] == "hulls");
  CHECK(summary["polyconvex"]["A1"] == true);
  CHECK(summary["polyconvex"]["A2"] == true);
  CHECK(summary["polyconvex"]["B"] == false);
  CHECK(summary["arc_all_accepted"] == true);
  CHECK(summary["arc_max_residual"].get<double>() <= cfg.residual_tol);
}

TEST_CASE("counterexample report reproduces the loss of polyconvexity") {
  const RunConfig cfg = parse_config_text("N = 8\nt_samples = 0.25, 0.5\n");

  for (const char* variant : {"standard", "convex-phase2"}) {
    RunConfig c = cfg;
    c.variant = variant;
    const std::string dir = fresh_dir(std::string("counterexample-") + variant);
    const CommandResult r = run_counterexample(c, dir);
    CHECK(r.exit_code == 0);
    CHECK(contains(r.text, "loss of polyconvexity reproduced: yes"));

    const auto rows = lines_of(slurp(dir + "/verdicts.csv"));
    REQUIRE(rows.size() == 1 + 3 + 2);
    CHECK(contains(rows[1], "O,CertifiedMember"));
    CHECK(contains(rows[2], "B1,CertifiedMember"));
    CHECK(contains(rows[3], "B2,CertifiedMember"));
    CHECK(contains(rows[4], "ExcludedBySverak,exclusion"));
    CHECK(contains(rows[5], "ExcludedBySverak,exclusion"));

    const auto summary = nlohmann::json::parse(slurp(dir + "/summary.json"));
    CHECK(summary["reproduced"] == true);
    CHECK(summary["variant"] == variant);
  }
}

TEST_CASE("homogenize report certifies a hull vertex and tracks k") {
  const std::string dir = fresh_dir("homogenize");
  const RunConfig cfg = parse_config_text(
      "matrix_a = B1\nn_list = 8\nk_list = 1, 2\n");
  const CommandResult r = run_homogenize(cfg, dir);
  CHECK(r.exit_code == 0);

  const auto rows = lines_of(slurp(dir + "/estimates.csv"));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == "N,k,estimate,iterations,converged");
  // Columns: N,k,estimate,...; estimates are non-increasing in k.
  double prev = -1.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::istringstream in(rows[i]);
    std::string n_s, k_s, e_s;
    std::getline(in, n_s, ',');
    std::getline(in, k_s, ',');
    std::getline(in, e_s, ',');
    const double est = std::stod(e_s);
    CHECK(est <= 1e-10);  // B1 is certified by the matched laminate
    if (prev >= 0.0) CHECK(est <= prev + 1e-15);
    prev = est;
    CHECK(contains(rows[i], "true"));
  }
  CHECK(fs::exists(dir + "/minimizer_N8_k1.txt"));
  CHECK(fs::exists(dir + "/minimizer_N8_k2.txt"));

  const auto summary = nlohmann::json::parse(slurp(dir + "/summary.json"));
  CHECK(summary["all_converged"] == true);
  CHECK(summary["matrix_a"] == "B1");
}

TEST_CASE("homogenize flags an unconverged solve with exit code 3") {
  const std::string dir = fresh_dir("homogenize-fail");
  const RunConfig cfg = parse_config_text(
      "matrix_a = b_arc:0.5\nn_list = 8\nk_list = 1\nmax_iterations = 1\n");
  const CommandResult r = run_homogenize(cfg, dir);
  CHECK(r.exit_code == 3);
  const auto summary = nlohmann::json::parse(slurp(dir + "/summary.json"));
  CHECK(summary["all_converged"] == false);
}

TEST_CASE("two-scale report checks supports and averages") {
  const std::string dir = fresh_dir("two-scale");
  const RunConfig cfg = parse_config_text("N = 16\neps_list = 2, 4\n");
  const CommandResult r = run_two_scale(cfg, dir);
  CHECK(r.exit_code == 0);

  const auto rl = lines_of(slurp(dir + "/rl_errors.csv"));
  REQUIRE(rl.size() == 3);
  CHECK(rl[0] == "eps,error");

  const auto sup = lines_of(slurp(dir + "/support.csv"));
  REQUIRE(sup.size() == 3);
  CHECK(sup[0] == "field,pass,escaped_mass,pointwise_fraction");
  CHECK(contains(sup[1], "laminate,true,0,"));
  CHECK(contains(sup[2], "corrupted,false,"));

  const auto summary = nlohmann::json::parse(slurp(dir + "/summary.json"));
  CHECK(summary["achieved_corruption"].get<double>() > 0.0);
  CHECK(summary["support"].size() == 2);
}

TEST_CASE("report files are byte-identical across reruns") {
  const RunConfig cfg = parse_config_text("N = 16\nseed = 11\n");
  const std::string d1 = fresh_dir("repeat1");
  const std::string d2 = fresh_dir("repeat2");
  CHECK(run_two_scale(cfg, d1).exit_code == 0);
  CHECK(run_two_scale(cfg, d2).exit_code == 0);
  for (const char* f : {"/rl_errors.csv", "/support.csv", "/summary.json"})
    CHECK(slurp(d1 + f) == slurp(d2 + f));

  const std::string h1 = fresh_dir("repeat-hom1");
  const std::string h2 = fresh_dir("repeat-hom2");
  const RunConfig hom = parse_config_text("matrix_a = B1\nn_list = 8\nk_list = 1\n");
  CHECK(run_homogenize(hom, h1).exit_code == 0);
  CHECK(run_homogenize(hom, h2).exit_code == 0);
  for (const char* f :
       {"/estimates.csv", "/minimizer_N8_k1.txt", "/summary.json"})
    CHECK(slurp(h1 + f) == slurp(h2 + f));
}

TEST_CASE("command dispatch") {
  const RunConfig cfg = parse_config_text("");
  CHECK_THROWS_AS(run_command("unknown", cfg, fresh_dir("dispatch")),
                  config_error);
}
