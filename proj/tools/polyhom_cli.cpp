// Command-line front end; all functionality goes through the shared C API.
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "polyhom/polyhom.h"

namespace {

int run(const std::string& command, const std::string& config,
        const std::string& out_dir, const std::string& variant, int threads) {
  int exit_code = 0;
  char* text = nullptr;
  const polyhom_status st =
      polyhom_run(command.c_str(), config.c_str(), out_dir.c_str(),
                  variant.c_str(), threads, &exit_code, &text);
  if (st != POLYHOM_OK) {
    std::fprintf(stderr, "error: %s\n", polyhom_last_error());
    return 2;
  }
  if (text) {
    std::fputs(text, exit_code == 0 ? stdout : stderr);
    polyhom_string_free(text);
  }
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(polyhom_version()) +
               " - polyconvex hulls and periodic homogenization"};
  app.require_subcommand(1);
  // Global options are accepted on either side of the subcommand.
  app.fallthrough();

  std::string config, out_dir = "polyhom_out", variant;
  int threads = 0;
  app.add_option("--config", config, "key=value configuration file");
  app.add_option("--out", out_dir, "output directory for report files");
  app.add_option("--variant", variant,
                 "composite variant: standard or convex-phase2")
      ->check(CLI::IsMember({"standard", "convex-phase2"}));
  app.add_option("--threads", threads, "worker threads (default: config)");

  app.add_subcommand("hulls", "hull verdicts and arc membership data");
  app.add_subcommand("counterexample",
                     "membership pipeline for the homogenized zero set");
  app.add_subcommand("homogenize", "cell-problem estimates over an (N,k) grid");
  app.add_subcommand("two-scale",
                     "Riemann-Lebesgue table and support checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // malformed usage is a configuration error
  }

  return run(app.get_subcommands().front()->get_name(), config, out_dir,
             variant, threads);
}
