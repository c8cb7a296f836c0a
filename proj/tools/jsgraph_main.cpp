// jsgraph command-line tool: structural checks and Jenkins-Serrin graph
// construction for minimal, cmc, and translating-soliton equations.
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "jsgraph/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Jenkins-Serrin graphs: structural checks, meshing, capped continuation"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");  // keep --h free for the mesh size

  jsgraph::RunConfig cfg;

  auto add_common = [&](CLI::App* sub, bool needs_domain) {
    sub->set_help_flag("--help", "print help");
    if (needs_domain)
      sub->add_option("--domain", cfg.domain_path, "domain JSON file")->required();
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_option("--format", cfg.format, "report format")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", cfg.seed, "root seed for stochastic trials");
  };
  auto add_mode = [&](CLI::App* sub) {
    sub->add_option("--mode", cfg.mode, "minimal | cmc | translating")
        ->check(CLI::IsMember({"minimal", "cmc", "translating"}));
    sub->add_option("--H", cfg.H, "mean curvature (cmc mode)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--c", cfg.c, "translation speed (translating mode)")
        ->check(CLI::PositiveNumber);
  };
  auto add_mesh_params = [&](CLI::App* sub) {
    sub->add_option("--h", cfg.h, "target interior edge length")
        ->check(CLI::PositiveNumber);
    sub->add_option("--grading", cfg.grading, "refinement factor toward blow-up arcs")
        ->check(CLI::Range(1.0, 1e6));
    sub->add_option("--mesh", cfg.mesh_path, "use this jsmesh file instead of meshing");
  };

  auto* check = app.add_subcommand("check", "validate a domain and run the structural checks");
  add_common(check, true);
  add_mode(check);

  auto* mesh = app.add_subcommand("mesh", "triangulate a domain and write a jsmesh file");
  add_common(mesh, true);
  mesh->add_option("--h", cfg.h, "target interior edge length")->check(CLI::PositiveNumber);
  mesh->add_option("--grading", cfg.grading, "refinement factor toward blow-up arcs")
      ->check(CLI::Range(1.0, 1e6));

  auto* solve = app.add_subcommand("solve", "single Dirichlet solve with capped data");
  add_common(solve, true);
  add_mode(solve);
  add_mesh_params(solve);
  solve->add_option("--cap", cfg.cap, "finite value replacing +/-infinity on A/B arcs");
  solve->add_option("--tol", cfg.tol, "relative residual tolerance")
      ->check(CLI::PositiveNumber);

  auto* js = app.add_subcommand("js", "capped monotone continuation toward the JS solution");
  add_common(js, true);
  add_mode(js);
  add_mesh_params(js);
  js->add_option("--caps", cfg.caps, "cap schedule, e.g. --caps 1,2,4,8")->delimiter(',');
  js->add_option("--tol", cfg.tol, "relative residual tolerance")->check(CLI::PositiveNumber);
  js->add_option("--trials", cfg.trials, "minimality trials in the analysis stage");
  js->add_flag("--override-check", cfg.override_check,
               "run the continuation even when the structural check fails");

  auto* analyze = app.add_subcommand("analyze", "post-process a saved solution");
  add_common(analyze, true);
  add_mode(analyze);
  analyze->add_option("--mesh", cfg.mesh_path, "jsmesh file")->required();
  analyze->add_option("--solution", cfg.solution_path, "solution CSV (x,y,u)")->required();
  analyze->add_option("--trials", cfg.trials, "minimality trials");

  auto* oracle = app.add_subcommand("oracle", "print oracle values and identity checks");
  add_common(oracle, false);

  CLI11_PARSE(app, argc, argv);

  for (auto* sub : {check, mesh, solve, js, analyze, oracle})
    if (sub->parsed()) cfg.command = sub->get_name();

  const jsgraph::RunOutcome outcome = jsgraph::run(cfg);
  std::fputs(outcome.report.c_str(), stdout);
  if (!outcome.report.empty() && outcome.report.back() != '\n') std::fputs("\n", stdout);
  return outcome.exit_code;
}
