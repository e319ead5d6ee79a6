#include "config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "hulls.hpp"

namespace polyhom {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    out.push_back(trim(s.substr(pos, next - pos)));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    throw config_error("config: key '" + key + "': not a number: '" + v + "'");
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    throw config_error("config: key '" + key + "': not an integer: '" + v + "'");
  }
}

// Accepts "1/m" or a bare integer denominator m.
int parse_eps(const std::string& key, const std::string& v) {
  std::string denom = v;
  if (v.rfind("1/", 0) == 0) denom = v.substr(2);
  const long long m = parse_int(key, denom);
  if (m < 1)
    throw config_error("config: key '" + key + "': eps must be 1/m with m >= 1");
  return static_cast<int>(m);
}

Rect parse_rect(const std::string& key, const std::string& v) {
  const auto parts = split(v, ',');
  if (parts.size() != 4)
    throw config_error("config: key '" + key +
                       "': expected x1lo,x1hi,x2lo,x2hi");
  Rect r{parse_double(key, parts[0]), parse_double(key, parts[1]),
         parse_double(key, parts[2]), parse_double(key, parts[3])};
  if (!(r.x1lo <= r.x1hi && r.x2lo <= r.x2hi))
    throw config_error("config: key '" + key + "': empty rectangle bounds");
  return r;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;

  const std::map<std::string, std::function<void(const std::string&)>>
      handlers = {
          {"p", [&](const std::string& v) { cfg.p = parse_double("p", v); }},
          {"N",
           [&](const std::string& v) {
             cfg.N = static_cast<int>(parse_int("N", v));
           }},
          {"k",
           [&](const std::string& v) {
             cfg.k = static_cast<int>(parse_int("k", v));
           }},
          {"n_list",
           [&](const std::string& v) {
             cfg.n_list.clear();
             for (const auto& s : split(v, ','))
               cfg.n_list.push_back(static_cast<int>(parse_int("n_list", s)));
           }},
          {"k_list",
           [&](const std::string& v) {
             cfg.k_list.clear();
             for (const auto& s : split(v, ','))
               cfg.k_list.push_back(static_cast<int>(parse_int("k_list", s)));
           }},
          {"eps_list",
           [&](const std::string& v) {
             cfg.eps_denoms.clear();
             for (const auto& s : split(v, ','))
               cfg.eps_denoms.push_back(parse_eps("eps_list", s));
           }},
          {"t_samples",
           [&](const std::string& v) {
             cfg.t_samples.clear();
             for (const auto& s : split(v, ','))
               cfg.t_samples.push_back(parse_double("t_samples", s));
           }},
          {"zero_tol",
           [&](const std::string& v) {
             cfg.zero_tol = parse_double("zero_tol", v);
           }},
          {"residual_tol",
           [&](const std::string& v) {
             cfg.residual_tol = parse_double("residual_tol", v);
           }},
          {"support_tol",
           [&](const std::string& v) {
             cfg.support_tol = parse_double("support_tol", v);
           }},
          {"seed",
           [&](const std::string& v) {
             cfg.seed = static_cast<std::uint64_t>(parse_int("seed", v));
           }},
          {"threads",
           [&](const std::string& v) {
             cfg.threads = static_cast<int>(parse_int("threads", v));
           }},
          {"matrix_a", [&](const std::string& v) { cfg.matrix_a = v; }},
          {"y_bins",
           [&](const std::string& v) {
             cfg.y_bins = static_cast<int>(parse_int("y_bins", v));
           }},
          {"lambda_lo",
           [&](const std::string& v) {
             cfg.lambda_bins.lo = parse_double("lambda_lo", v);
           }},
          {"lambda_hi",
           [&](const std::string& v) {
             cfg.lambda_bins.hi = parse_double("lambda_hi", v);
           }},
          {"lambda_bins",
           [&](const std::string& v) {
             cfg.lambda_bins.n = static_cast<int>(parse_int("lambda_bins", v));
           }},
          {"support_eps",
           [&](const std::string& v) {
             cfg.support_eps_denom = parse_eps("support_eps", v);
           }},
          {"corrupt_fraction",
           [&](const std::string& v) {
             cfg.corrupt_fraction = parse_double("corrupt_fraction", v);
           }},
          {"corrupt_magnitude",
           [&](const std::string& v) {
             cfg.corrupt_magnitude = parse_double("corrupt_magnitude", v);
           }},
          {"max_iterations",
           [&](const std::string& v) {
             cfg.max_iterations =
                 static_cast<int>(parse_int("max_iterations", v));
           }},
          {"grad_tol",
           [&](const std::string& v) {
             cfg.grad_tol = parse_double("grad_tol", v);
           }},
          {"method",
           [&](const std::string& v) {
             if (v != "gd" && v != "lbfgs")
               throw config_error("config: method must be 'gd' or 'lbfgs'");
             cfg.method = v;
           }},
          {"variant",
           [&](const std::string& v) {
             if (v != "standard" && v != "convex-phase2")
               throw config_error(
                   "config: variant must be 'standard' or 'convex-phase2'");
             cfg.variant = v;
           }},
          {"rl_u", [&](const std::string& v) { cfg.rl_u = parse_rect("rl_u", v); }},
          {"rl_v", [&](const std::string& v) { cfg.rl_v = parse_rect("rl_v", v); }},
      };

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("config: line " + std::to_string(lineno) +
                         ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = handlers.find(key);
    if (it == handlers.end())
      throw config_error("config: line " + std::to_string(lineno) +
                         ": unknown key '" + key + "'");
    it->second(value);
  }

  // Range checks, so commands can rely on preconditions.
  if (!(cfg.p >= 1.0)) throw config_error("config: p must be >= 1");
  if (cfg.N < 4 || cfg.N % 2 != 0)
    throw config_error("config: N must be even and >= 4");
  if (cfg.k < 1) throw config_error("config: k must be >= 1");
  for (int n : cfg.n_list)
    if (n < 4 || n % 2 != 0)
      throw config_error("config: n_list entries must be even and >= 4");
  for (int kk : cfg.k_list)
    if (kk < 1) throw config_error("config: k_list entries must be >= 1");
  if (cfg.n_list.empty() || cfg.k_list.empty())
    throw config_error("config: n_list and k_list must be nonempty");
  for (double t : cfg.t_samples)
    if (!(t >= 0.0 && t <= 1.0))
      throw config_error("config: t_samples must lie in [0,1]");
  if (!(cfg.zero_tol > 0.0)) throw config_error("config: zero_tol must be > 0");
  if (!(cfg.residual_tol > 0.0))
    throw config_error("config: residual_tol must be > 0");
  if (!(cfg.support_tol >= 0.0))
    throw config_error("config: support_tol must be >= 0");
  if (cfg.threads < 1) throw config_error("config: threads must be >= 1");
  if (cfg.y_bins < 1) throw config_error("config: y_bins must be >= 1");
  if (cfg.lambda_bins.n < 1 || !(cfg.lambda_bins.lo < cfg.lambda_bins.hi))
    throw config_error("config: lambda bins must be nonempty with lo < hi");
  if (!(cfg.corrupt_fraction > 0.0 && cfg.corrupt_fraction <= 0.5))
    throw config_error("config: corrupt_fraction must lie in (0, 0.5]");
  if (cfg.max_iterations < 1)
    throw config_error("config: max_iterations must be >= 1");
  if (!(cfg.grad_tol > 0.0)) throw config_error("config: grad_tol must be > 0");

  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

Mat2 parse_matrix_spec(const std::string& spec) {
  const std::string s = trim(spec);
  if (s == "O") return counterexample::zero_mat();
  if (s == "B1") return counterexample::average_a();
  if (s == "B2") return counterexample::average_b();
  if (s.rfind("b_arc:", 0) == 0) {
    const double t = parse_double("matrix_a", s.substr(6));
    if (!(t >= 0.0 && t <= 1.0))
      throw config_error("config: b_arc parameter must lie in [0,1]");
    return b_arc(t);
  }
  const auto parts = split(s, ',');
  if (parts.size() != 4)
    throw config_error(
        "config: matrix spec must be O, B1, B2, b_arc:<t>, or four "
        "comma-separated entries");
  return Mat2{parse_double("matrix_a", parts[0]),
              parse_double("matrix_a", parts[1]),
              parse_double("matrix_a", parts[2]),
              parse_double("matrix_a", parts[3])};
}

SolverOptions solver_options(const RunConfig& cfg) {
  SolverOptions opts;
  opts.max_iterations = cfg.max_iterations;
  opts.grad_tol = cfg.grad_tol;
  opts.method = cfg.method == "lbfgs" ? SolverOptions::Method::LBFGS
                                      : SolverOptions::Method::GradientDescent;
  opts.threads = cfg.threads;
  return opts;
}

CellEnergy composite_for_variant(const RunConfig& cfg) {
  return cfg.variant == "convex-phase2"
             ? composite_cell_energy_convex_phase2(cfg.p)
             : composite_cell_energy(cfg.p);
}

}  // namespace polyhom
