#include <CLI11.hpp>
#include <iostream>

#include "stillwater/run.hpp"

int main(int argc, char** argv) {
  using namespace stillwater;
  CLI::App app{"Stationary forced viscous shallow water solver on a periodic domain"};
  app.require_subcommand(1);

  std::string config, out, emit;
  int jobs = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "INI run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "Output directory (overrides config and STILLWATER_OUT)");
    sub->add_option("--jobs", jobs, "Parallel kappa points in solve mode")->check(CLI::Range(1, 1024));
    sub->add_option("--emit", emit, "Extra fields to write: div_u,curl_u");
  };
  CLI::App* solve = app.add_subcommand("solve", "Solve at each configured kappa");
  CLI::App* cont = app.add_subcommand("continue", "Continue the solution branch from kappa = 0");
  CLI::App* verify = app.add_subcommand("verify", "Run the invariant suite on the configured problem");
  for (CLI::App* sub : {solve, cont, verify}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_code::config;
  }

  const Mode mode = solve->parsed() ? Mode::solve : cont->parsed() ? Mode::continue_branch : Mode::verify;
  RunConfig cfg;
  try {
    cfg = load_config(config);
    apply_environment(cfg);
    if (!out.empty()) cfg.out = out;
    if (jobs > 0) cfg.jobs = jobs;
    if (!emit.empty()) set_emit(cfg, emit);
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_code::config;
  }
  return run(mode, cfg, std::cerr);
}
