#include "jsgraph/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "jsgraph/analysis.hpp"
#include "jsgraph/checks.hpp"
#include "jsgraph/errors.hpp"
#include "jsgraph/mesh.hpp"
#include "jsgraph/oracles.hpp"
#include "jsgraph/solver.hpp"

namespace jsgraph {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CheckMode mode_from_string(const std::string& s) {
  if (s == "minimal") return CheckMode::minimal;
  if (s == "cmc") return CheckMode::cmc;
  if (s == "translating") return CheckMode::translating;
  throw ParseError("unknown mode \"" + s + "\" (expected minimal|cmc|translating)");
}

ProblemKind kind_from_config(const RunConfig& cfg) {
  const CheckMode m = mode_from_string(cfg.mode);
  switch (m) {
    case CheckMode::minimal: return ProblemKind::minimal();
    case CheckMode::cmc: return ProblemKind::cmc(cfg.H);
    case CheckMode::translating: return ProblemKind::translator(cfg.c);
  }
  throw ParseError("unknown mode");
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  if (cfg.out_dir.empty()) return name;
  fs::create_directories(cfg.out_dir);
  return (fs::path(cfg.out_dir) / name).string();
}

void write_file(const std::string& path, const std::string& text,
                std::vector<std::string>* files) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open for writing: " + path);
  out << text;
  if (files) files->push_back(path);
}

ordered_json config_echo(const RunConfig& cfg) {
  ordered_json j;
  j["command"] = cfg.command;
  j["domain"] = cfg.domain_path;
  if (!cfg.mesh_path.empty()) j["mesh"] = cfg.mesh_path;
  j["mode"] = cfg.mode;
  if (cfg.mode == "cmc") j["H"] = cfg.H;
  if (cfg.mode == "translating") j["c"] = cfg.c;
  j["h"] = cfg.h;
  j["grading"] = cfg.grading;
  j["tol"] = cfg.tol;
  j["seed"] = cfg.seed;
  return j;
}

std::string solution_csv(const TriMesh& mesh, const std::vector<double>& u) {
  std::string out = "x,y,u\n";
  for (size_t i = 0; i < mesh.vertices.size(); ++i) {
    out += fmt17(mesh.vertices[i].x);
    out += ",";
    out += fmt17(mesh.vertices[i].y);
    out += ",";
    out += fmt17(u[i]);
    out += "\n";
  }
  return out;
}

ordered_json solution_meta(const Solution& sol, const std::string& mesh_path) {
  ordered_json j;
  j["kind"] = sol.kind.name();
  if (sol.kind.type == ProblemType::cmc) j["H"] = sol.kind.H0;
  if (sol.kind.type == ProblemType::translator) j["c"] = sol.kind.c;
  j["cap"] = sol.cap;
  j["residual"] = sol.residual_norm;
  j["iterations"] = sol.iterations;
  j["converged"] = sol.converged;
  if (!sol.diagnostics.empty()) j["diagnostics"] = sol.diagnostics;
  j["mesh"] = mesh_path;
  return j;
}

TriMesh mesh_for_solve(const RunConfig& cfg, const DomainSpec& spec) {
  if (!cfg.mesh_path.empty()) {
    TriMesh mesh = read_jsmesh_file(cfg.mesh_path);
    mesh.attach_arcs(spec);
    return mesh;
  }
  return generate_mesh(spec, cfg.h, cfg.grading);
}

ordered_json analysis_json(const DomainSpec& spec, const TriMesh& mesh,
                           const std::vector<double>& u, ProblemKind kind,
                           const RunConfig& cfg) {
  ordered_json j;
  const GraphSurface surface = make_surface(mesh, spec.metric, u);
  const double c_weight = kind.type == ProblemType::translator ? kind.c : 1.0;
  const auto wa = weighted_area(surface, c_weight);
  j["weighted_area"] = {{"c", c_weight},
                        {"log_value", wa.log_value},
                        {"value", wa.value()},
                        {"overflowed", wa.overflowed}};

  if (kind.type == ProblemType::translator) {
    const auto min_rep = minimality_test(surface, kind.c, cfg.trials, cfg.seed);
    ordered_json seeds = ordered_json::array();
    for (const unsigned s : min_rep.failing_seeds) seeds.push_back(s);
    j["minimality"] = {{"trials", min_rep.trials},
                       {"first_order_failures", min_rep.first_order_failures},
                       {"second_order_failures", min_rep.second_order_failures},
                       {"worst_first_order", min_rep.worst_first_order},
                       {"worst_second_diff", min_rep.worst_second_diff},
                       {"tol_quad", min_rep.tol_quad},
                       {"seeds", seeds},
                       {"pass", min_rep.pass}};
  }

  ordered_json verdicts = ordered_json::array();
  for (const auto& arc : spec.arcs) {
    if (arc.kind == ArcKind::C) continue;
    const auto v = boundary_curvature_verdict(spec, arc.id, kind);
    verdicts.push_back({{"arc", v.arc_id},
                        {"expected", v.expected},
                        {"max_dev", v.max_deviation},
                        {"verdict", v.pass ? "pass" : "fail"}});
  }
  j["boundary"] = verdicts;

  if (spec.metric.is_euclidean()) {
    // entropy diagnostic over a deterministic sample of surface points
    std::vector<Vec3> centers;
    const size_t stride = std::max<size_t>(1, mesh.vertices.size() / 5);
    for (size_t i = 0; i < mesh.vertices.size() && centers.size() < 5; i += stride)
      centers.push_back({mesh.vertices[i].x, mesh.vertices[i].y, u[i]});
    const double d = spec.diameter();
    const auto ent = entropy_ratio(surface, centers, {0.25 * d, 0.5 * d});
    j["entropy"] = {{"sup", ent.sup_ratio},
                    {"argmax_center", ent.argmax_center},
                    {"argmax_radius", ent.argmax_radius}};
  }
  return j;
}

}  // namespace

RunOutcome run_check(const RunConfig& cfg) {
  RunOutcome out;
  const auto spec = DomainSpec::from_json_file(cfg.domain_path);
  const CheckMode mode = mode_from_string(cfg.mode);
  const CheckReport rep = run_check(spec, mode, cfg.H);
  const bool csv = cfg.format == "csv";
  out.report = csv ? rep.to_csv_text() : rep.to_json_text();
  if (!cfg.out_dir.empty())
    write_file(out_path(cfg, spec.name + (csv ? ".check.csv" : ".check.json")),
               out.report + (csv ? "" : "\n"), &out.files);
  out.exit_code = rep.pass ? kExitPass : kExitCheckFail;
  return out;
}

RunOutcome run_mesh(const RunConfig& cfg) {
  RunOutcome out;
  const auto spec = DomainSpec::from_json_file(cfg.domain_path);
  const TriMesh mesh = generate_mesh(spec, cfg.h, cfg.grading);
  std::ostringstream ms;
  write_jsmesh(mesh, ms);
  const std::string mesh_file = out_path(cfg, spec.name + ".jsmesh");
  write_file(mesh_file, ms.str(), &out.files);

  ordered_json j = config_echo(cfg);
  j["vertices"] = mesh.vertex_count();
  j["triangles"] = mesh.triangle_count();
  j["boundary_edges"] = mesh.boundary_edges.size();
  j["total_area"] = mesh.total_area();
  j["min_angle_deg"] = mesh.min_angle_deg();
  j["file"] = mesh_file;
  out.report = j.dump(2);
  return out;
}

RunOutcome run_solve(const RunConfig& cfg) {
  RunOutcome out;
  const auto spec = DomainSpec::from_json_file(cfg.domain_path);
  const ProblemKind kind = kind_from_config(cfg);
  const TriMesh mesh = mesh_for_solve(cfg, spec);
  const DirichletData data = build_dirichlet_data(spec, mesh, cfg.cap);
  SolverConfig solver_cfg;
  solver_cfg.tol_rel = cfg.tol;
  const Solution sol = newton_solve(mesh, spec.metric, data, kind, solver_cfg);

  const std::string mesh_file = out_path(cfg, spec.name + ".jsmesh");
  std::ostringstream ms;
  write_jsmesh(mesh, ms);
  write_file(mesh_file, ms.str(), &out.files);
  write_file(out_path(cfg, spec.name + ".solution.csv"), solution_csv(mesh, sol.u),
             &out.files);
  ordered_json meta = config_echo(cfg);
  meta["cap"] = cfg.cap;
  meta["solution"] = solution_meta(sol, mesh_file);
  out.report = meta.dump(2);
  write_file(out_path(cfg, spec.name + ".solution.json"), out.report + "\n", &out.files);
  out.exit_code = sol.converged ? kExitPass : kExitNoConvergence;
  return out;
}

RunOutcome run_js(const RunConfig& cfg) {
  RunOutcome out;
  const auto spec = DomainSpec::from_json_file(cfg.domain_path);
  const ProblemKind kind = kind_from_config(cfg);
  SolverConfig solver_cfg;
  solver_cfg.tol_rel = cfg.tol;
  solver_cfg.seed = cfg.seed;
  if (!cfg.caps.empty()) solver_cfg.caps = cfg.caps;

  ContinuationResult result =
      !cfg.mesh_path.empty()
          ? continuation_solve_on_mesh(spec, mesh_for_solve(cfg, spec), kind, solver_cfg,
                                       cfg.override_check)
          : continuation_solve(spec, kind, solver_cfg, cfg.h, cfg.grading,
                               cfg.override_check);

  ordered_json j = config_echo(cfg);
  {
    ordered_json caps = ordered_json::array();
    for (const double c : solver_cfg.cap_schedule()) caps.push_back(c);
    j["caps"] = caps;
  }
  j["check"] = ordered_json::parse(result.check.to_json_text());
  j["override_check"] = cfg.override_check;
  if (result.mesh) {
    j["mesh_stats"] = {{"vertices", result.mesh->vertex_count()},
                       {"triangles", result.mesh->triangle_count()},
                       {"min_angle_deg", result.mesh->min_angle_deg()}};
  }
  ordered_json caps = ordered_json::array();
  for (const auto& d : result.caps)
    caps.push_back({{"cap", d.cap},
                    {"iterations", d.iterations},
                    {"residual", d.residual},
                    {"converged", d.converged},
                    {"min_increment", d.min_increment},
                    {"min_increment_interior", d.min_increment_interior},
                    {"interior_delta", d.interior_delta}});
  j["cap_table"] = caps;
  j["monotonicity_applicable"] = result.monotonicity_applicable;
  j["monotone_ok"] = result.monotone_ok;
  j["js_converged"] = result.js_converged;
  j["converged_at_cap"] = result.converged_at_cap;
  j["delta"] = result.delta;
  j["eps_js"] = result.eps_js;
  j["aborted"] = result.aborted;
  j["abort_reason"] = result.abort_reason;

  if (!result.aborted && !result.solutions.empty()) {
    const Solution& last = result.solutions.back();
    j["analysis"] = analysis_json(spec, *result.mesh, last.u, kind, cfg);
    const std::string mesh_file = out_path(cfg, spec.name + ".jsmesh");
    std::ostringstream ms;
    write_jsmesh(*result.mesh, ms);
    write_file(mesh_file, ms.str(), &out.files);
    write_file(out_path(cfg, spec.name + ".limit.csv"),
               solution_csv(*result.mesh, last.u), &out.files);
  }

  out.report = j.dump(2);
  if (!cfg.out_dir.empty())
    write_file(out_path(cfg, spec.name + ".js.json"), out.report + "\n", &out.files);
  if (result.aborted)
    out.exit_code = result.check.pass || cfg.override_check ? kExitNoConvergence
                                                            : kExitCheckFail;
  else if (!result.check.pass && !cfg.override_check)
    out.exit_code = kExitCheckFail;
  else if (!result.monotone_ok)
    out.exit_code = kExitInternal;  // discretization failure
  else
    out.exit_code = kExitPass;
  return out;
}

RunOutcome run_analyze(const RunConfig& cfg) {
  RunOutcome out;
  const auto spec = DomainSpec::from_json_file(cfg.domain_path);
  if (cfg.mesh_path.empty() || cfg.solution_path.empty())
    throw ParseError("analyze needs --mesh and --solution");
  TriMesh mesh = read_jsmesh_file(cfg.mesh_path);
  mesh.attach_arcs(spec);

  // load "x,y,u" rows
  std::ifstream in(cfg.solution_path);
  if (!in) throw ParseError("cannot open solution file: " + cfg.solution_path);
  std::string line;
  std::getline(in, line);  // header
  std::vector<double> u;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double x, y, v;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &y, &v) != 3)
      throw ParseError("solution CSV: malformed row \"" + line + "\"");
    u.push_back(v);
  }
  if (u.size() != mesh.vertices.size())
    throw ParseError("solution CSV has " + std::to_string(u.size()) + " rows but the mesh has " +
                     std::to_string(mesh.vertices.size()) + " vertices");

  const ProblemKind kind = kind_from_config(cfg);
  ordered_json j = config_echo(cfg);
  j["analysis"] = analysis_json(spec, mesh, u, kind, cfg);
  out.report = j.dump(2);
  if (!cfg.out_dir.empty())
    write_file(out_path(cfg, spec.name + ".analysis.json"), out.report + "\n", &out.files);
  return out;
}

RunOutcome run_oracle(const RunConfig& cfg) {
  RunOutcome out;
  std::string csv = "oracle,x,y,value,identity,expected,residual\n";
  const auto eu = ConformalMetric::euclidean();
  auto row = [&](const std::string& name, double x, double y, double value, double ident,
                 double expected) {
    csv += name + "," + fmt17(x) + "," + fmt17(y) + "," + fmt17(value) + "," + fmt17(ident) +
           "," + fmt17(expected) + "," + fmt17(std::abs(ident - expected)) + "\n";
  };
  const double h = 1e-4;
  for (const double x : {0.0, 0.3, 0.7, 1.0}) {
    for (const double y : {0.0, 0.4, -0.6}) {
      row("scherk", x, y, scherk(x, y), fd_divergence(scherk_field(), eu, {x, y}, h), 0.0);
      row("grim_reaper", x, y, grim_reaper(x, 1.0),
          fd_divergence(grim_reaper_field(1.0), eu, {x, y}, h), std::cos(x));
      row("spherical_cap", x, y, spherical_cap(x, y, 2.0),
          fd_divergence(spherical_cap_field(2.0), eu, {x, y}, h), 1.0);
    }
  }
  // 1D shooting cross-checks
  const auto gr = ode_shoot(OdeKind::translator, 1.0, -1.2, 1.2, grim_reaper(1.2, 1.0),
                            grim_reaper(1.2, 1.0), 24000);
  row("ode_translator", 0.5, 0.0, gr.eval(0.5), gr.eval(0.5), grim_reaper(0.5, 1.0));
  const auto cap = ode_shoot(OdeKind::cmc_radial, 1.0, 0.0, 1.0, 0.0, -std::sqrt(3.0), 10000);
  row("ode_cmc_radial", 0.5, 0.0, cap.eval(0.5), cap.eval(0.5), spherical_cap(0.5, 0.0, 2.0));
  out.report = csv;
  if (!cfg.out_dir.empty()) write_file(out_path(cfg, "oracle.csv"), csv, &out.files);
  return out;
}

RunOutcome run(const RunConfig& cfg) {
  try {
    if (cfg.command == "check") return run_check(cfg);
    if (cfg.command == "mesh") return run_mesh(cfg);
    if (cfg.command == "solve") return run_solve(cfg);
    if (cfg.command == "js") return run_js(cfg);
    if (cfg.command == "analyze") return run_analyze(cfg);
    if (cfg.command == "oracle") return run_oracle(cfg);
    throw ParseError("unknown command \"" + cfg.command + "\"");
  } catch (const ParseError& e) {
    return {kExitInputError, std::string("error: ") + e.what() + "\n", {}};
  } catch (const DomainError& e) {
    return {kExitInputError, std::string("error: ") + e.what() + "\n", {}};
  } catch (const UnsupportedError& e) {
    return {kExitInputError, std::string("error: ") + e.what() + "\n", {}};
  } catch (const NumericError& e) {
    return {kExitNoConvergence, std::string("numeric error: ") + e.what() + "\n", {}};
  } catch (const std::exception& e) {
    return {kExitInternal, std::string("internal error: ") + e.what() + "\n", {}};
  }
}

}  // namespace jsgraph
