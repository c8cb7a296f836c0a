// pybind11 module exposing the main jsgraph operations.
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "jsgraph/analysis.hpp"
#include "jsgraph/checks.hpp"
#include "jsgraph/errors.hpp"
#include "jsgraph/mesh.hpp"
#include "jsgraph/oracles.hpp"
#include "jsgraph/pipeline.hpp"
#include "jsgraph/solver.hpp"

namespace py = pybind11;
using namespace jsgraph;

namespace {

CheckMode parse_mode(const std::string& s) {
  if (s == "minimal") return CheckMode::minimal;
  if (s == "cmc") return CheckMode::cmc;
  if (s == "translating") return CheckMode::translating;
  throw ParseError("mode must be minimal|cmc|translating");
}

ProblemKind parse_kind(const std::string& s, double H, double c) {
  if (s == "minimal") return ProblemKind::minimal();
  if (s == "cmc") return ProblemKind::cmc(H);
  if (s == "translator" || s == "translating") return ProblemKind::translator(c);
  throw ParseError("kind must be minimal|cmc|translator");
}

py::array_t<double> vertices_array(const TriMesh& mesh) {
  py::array_t<double> out({static_cast<py::ssize_t>(mesh.vertices.size()),
                           static_cast<py::ssize_t>(2)});
  auto r = out.mutable_unchecked<2>();
  for (size_t i = 0; i < mesh.vertices.size(); ++i) {
    r(i, 0) = mesh.vertices[i].x;
    r(i, 1) = mesh.vertices[i].y;
  }
  return out;
}

py::array_t<int> triangles_array(const TriMesh& mesh) {
  py::array_t<int> out({static_cast<py::ssize_t>(mesh.triangles.size()),
                        static_cast<py::ssize_t>(3)});
  auto r = out.mutable_unchecked<2>();
  for (size_t i = 0; i < mesh.triangles.size(); ++i)
    for (int k = 0; k < 3; ++k) r(i, k) = mesh.triangles[i][k];
  return out;
}

std::vector<double> to_vector(const py::array_t<double>& a) {
  auto r = a.unchecked<1>();
  std::vector<double> out(r.shape(0));
  for (py::ssize_t i = 0; i < r.shape(0); ++i) out[i] = r(i);
  return out;
}

py::object json_to_py(const nlohmann::ordered_json& j) {
  auto pyjson = py::module_::import("json");
  return pyjson.attr("loads")(j.dump());
}

py::dict check_to_dict(const CheckReport& rep) {
  auto pyjson = py::module_::import("json");
  return pyjson.attr("loads")(rep.to_json_text());
}

py::dict solve_result(const TriMesh& mesh, const Solution& sol) {
  py::dict d;
  py::array_t<double> u(static_cast<py::ssize_t>(sol.u.size()));
  auto r = u.mutable_unchecked<1>();
  for (size_t i = 0; i < sol.u.size(); ++i) r(i) = sol.u[i];
  d["u"] = u;
  d["converged"] = sol.converged;
  d["iterations"] = sol.iterations;
  d["residual"] = sol.residual_norm;
  d["cap"] = sol.cap;
  d["kind"] = sol.kind.name();
  (void)mesh;
  return d;
}

}  // namespace

PYBIND11_MODULE(_jsgraph, m) {
  m.doc() = "Jenkins-Serrin graphs: structural checks, meshing, capped continuation";

  py::register_exception<ParseError>(m, "JsgParseError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "JsgDomainError", PyExc_ValueError);
  py::register_exception<UnsupportedError>(m, "JsgUnsupportedError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "JsgNumericError", PyExc_RuntimeError);

  py::class_<DomainSpec>(m, "Domain")
      .def_static("from_json", &DomainSpec::from_json_text, py::arg("text"))
      .def_static("from_file", &DomainSpec::from_json_file, py::arg("path"))
      .def_property_readonly("name", [](const DomainSpec& d) { return d.name; })
      .def("to_json", &DomainSpec::to_json_text)
      .def("vertices",
           [](const DomainSpec& d) {
             py::list out;
             for (const auto& v : d.vertices()) out.append(py::make_tuple(v.x, v.y));
             return out;
           })
      .def("diameter", &DomainSpec::diameter)
      .def(
          "validate",
          [](const DomainSpec& d, const std::string& mode) {
            const auto rep = validate_domain(d, parse_mode(mode));
            py::dict out;
            out["ok"] = rep.ok;
            py::list issues;
            for (const auto& i : rep.issues) {
              py::dict di;
              di["code"] = i.code;
              di["message"] = i.message;
              di["arcs"] = i.arc_ids;
              issues.append(di);
            }
            out["issues"] = issues;
            return out;
          },
          py::arg("mode") = "minimal")
      .def(
          "check",
          [](const DomainSpec& d, const std::string& mode, double H) {
            return check_to_dict(run_check(d, parse_mode(mode), H));
          },
          py::arg("mode") = "minimal", py::arg("H") = 1.0);

  py::class_<TriMesh>(m, "Mesh")
      .def_property_readonly("num_vertices", &TriMesh::vertex_count)
      .def_property_readonly("num_triangles", &TriMesh::triangle_count)
      .def_property_readonly("h", [](const TriMesh& mesh) { return mesh.h_nominal; })
      .def("vertices", &vertices_array)
      .def("triangles", &triangles_array)
      .def("total_area", &TriMesh::total_area)
      .def("min_angle_deg", &TriMesh::min_angle_deg)
      .def("boundary_markers",
           [](const TriMesh& mesh) {
             py::list out;
             for (const auto& mk : mesh.markers) {
               if (mk.kind == VertexMarkerKind::interior) out.append(py::none());
               else if (mk.kind == VertexMarkerKind::domain_vertex) out.append(py::str("vertex"));
               else out.append(py::str(mk.arc_id));
             }
             return out;
           })
      .def("write", &write_jsmesh_file, py::arg("path"))
      .def_static(
          "read",
          [](const std::string& path, const DomainSpec* domain) {
            TriMesh mesh = read_jsmesh_file(path);
            if (domain) mesh.attach_arcs(*domain);
            return mesh;
          },
          py::arg("path"), py::arg("domain") = nullptr);

  py::class_<MeshOptions>(m, "MeshOptions")
      .def(py::init<>())
      .def_readwrite("min_angle_deg", &MeshOptions::min_angle_deg)
      .def_readwrite("grade_all_boundary", &MeshOptions::grade_all_boundary);
  m.def("generate_mesh", &generate_mesh, py::arg("domain"), py::arg("h"),
        py::arg("grading") = 1.0, py::arg("options") = MeshOptions{});
  m.def("refine", &refine, py::arg("mesh"));

  m.def(
      "solve",
      [](const DomainSpec& domain, const TriMesh& mesh, const std::string& kind, double H,
         double c, double cap, double tol) {
        const DirichletData data = build_dirichlet_data(domain, mesh, cap);
        SolverConfig cfg;
        cfg.tol_rel = tol;
        const Solution sol =
            newton_solve(mesh, domain.metric, data, parse_kind(kind, H, c), cfg);
        return solve_result(mesh, sol);
      },
      py::arg("domain"), py::arg("mesh"), py::arg("kind") = "minimal", py::arg("H") = 1.0,
      py::arg("c") = 1.0, py::arg("cap") = 1.0, py::arg("tol") = 1e-10);

  m.def(
      "continuation",
      [](const DomainSpec& domain, const std::string& kind, double H, double c,
         std::vector<double> caps, double h, double grading, bool override_check) {
        SolverConfig cfg;
        if (!caps.empty()) cfg.caps = std::move(caps);
        const auto result = continuation_solve(domain, parse_kind(kind, H, c), cfg, h,
                                               grading, override_check);
        py::dict d;
        d["aborted"] = result.aborted;
        d["abort_reason"] = result.abort_reason;
        d["monotone_ok"] = result.monotone_ok;
        d["js_converged"] = result.js_converged;
        d["converged_at_cap"] = result.converged_at_cap;
        d["delta"] = result.delta;
        d["eps_js"] = result.eps_js;
        d["check"] = check_to_dict(result.check);
        if (result.mesh) d["mesh"] = *result.mesh;
        py::list sols;
        for (const auto& sol : result.solutions)
          sols.append(solve_result(result.mesh ? *result.mesh : TriMesh{}, sol));
        d["solutions"] = sols;
        py::list caps_out;
        for (const auto& cd : result.caps) {
          py::dict di;
          di["cap"] = cd.cap;
          di["iterations"] = cd.iterations;
          di["residual"] = cd.residual;
          di["converged"] = cd.converged;
          di["min_increment"] = cd.min_increment;
          di["min_increment_interior"] = cd.min_increment_interior;
          di["interior_delta"] = cd.interior_delta;
          caps_out.append(di);
        }
        d["cap_table"] = caps_out;
        return d;
      },
      py::arg("domain"), py::arg("kind") = "translator", py::arg("H") = 1.0,
      py::arg("c") = 1.0, py::arg("caps") = std::vector<double>{}, py::arg("h") = 0.1,
      py::arg("grading") = 1.0, py::arg("override_check") = false);

  m.def(
      "weighted_area",
      [](const DomainSpec& domain, const TriMesh& mesh, const py::array_t<double>& u,
         double c) {
        const auto wa = weighted_area(make_surface(mesh, domain.metric, to_vector(u)), c);
        py::dict d;
        d["log_value"] = wa.log_value;
        d["value"] = wa.value();
        d["overflowed"] = wa.overflowed;
        return d;
      },
      py::arg("domain"), py::arg("mesh"), py::arg("u"), py::arg("c") = 1.0);

  m.def(
      "minimality_test",
      [](const DomainSpec& domain, const TriMesh& mesh, const py::array_t<double>& u,
         double c, int trials, unsigned seed) {
        const auto rep =
            minimality_test(make_surface(mesh, domain.metric, to_vector(u)), c, trials, seed);
        py::dict d;
        d["pass"] = rep.pass;
        d["trials"] = rep.trials;
        d["first_order_failures"] = rep.first_order_failures;
        d["second_order_failures"] = rep.second_order_failures;
        d["worst_first_order"] = rep.worst_first_order;
        d["worst_second_diff"] = rep.worst_second_diff;
        d["tol_quad"] = rep.tol_quad;
        d["failing_seeds"] = rep.failing_seeds;
        return d;
      },
      py::arg("domain"), py::arg("mesh"), py::arg("u"), py::arg("c") = 1.0,
      py::arg("trials") = 50, py::arg("seed") = 0);

  m.def(
      "boundary_curvature_verdict",
      [](const DomainSpec& domain, const std::string& arc_id, const std::string& kind,
         double H, double c) {
        const auto v = boundary_curvature_verdict(domain, arc_id, parse_kind(kind, H, c));
        py::dict d;
        d["arc"] = v.arc_id;
        d["expected"] = v.expected;
        d["max_dev"] = v.max_deviation;
        d["pass"] = v.pass;
        return d;
      },
      py::arg("domain"), py::arg("arc"), py::arg("kind") = "translator", py::arg("H") = 1.0,
      py::arg("c") = 1.0);

  m.def("cylinder_weighted_h", &cylinder_weighted_H, py::arg("kappa_sigma"), py::arg("t"),
        py::arg("c"), py::arg("m"));

  m.def(
      "entropy_ratio",
      [](const DomainSpec& domain, const TriMesh& mesh, const py::array_t<double>& u,
         const std::vector<std::array<double, 3>>& centers, const std::vector<double>& radii) {
        std::vector<Vec3> cs;
        for (const auto& c : centers) cs.push_back({c[0], c[1], c[2]});
        const auto rep =
            entropy_ratio(make_surface(mesh, domain.metric, to_vector(u)), cs, radii);
        py::dict d;
        d["sup"] = rep.sup_ratio;
        d["argmax_center"] = rep.argmax_center;
        d["argmax_radius"] = rep.argmax_radius;
        return d;
      },
      py::arg("domain"), py::arg("mesh"), py::arg("u"), py::arg("centers"), py::arg("radii"));

  // closed-form oracles
  m.def("scherk", &scherk, py::arg("x"), py::arg("y"));
  m.def("grim_reaper", &grim_reaper, py::arg("x"), py::arg("c") = 1.0);
  m.def("spherical_cap", &spherical_cap, py::arg("x"), py::arg("y"), py::arg("R"));

  m.def(
      "run_cli",
      [](const py::dict& kw) {
        RunConfig cfg;
        for (const auto& item : kw) {
          const std::string key = py::str(item.first);
          if (key == "command") cfg.command = py::cast<std::string>(item.second);
          else if (key == "domain") cfg.domain_path = py::cast<std::string>(item.second);
          else if (key == "mesh") cfg.mesh_path = py::cast<std::string>(item.second);
          else if (key == "solution") cfg.solution_path = py::cast<std::string>(item.second);
          else if (key == "mode") cfg.mode = py::cast<std::string>(item.second);
          else if (key == "H") cfg.H = py::cast<double>(item.second);
          else if (key == "c") cfg.c = py::cast<double>(item.second);
          else if (key == "cap") cfg.cap = py::cast<double>(item.second);
          else if (key == "caps") cfg.caps = py::cast<std::vector<double>>(item.second);
          else if (key == "h") cfg.h = py::cast<double>(item.second);
          else if (key == "grading") cfg.grading = py::cast<double>(item.second);
          else if (key == "tol") cfg.tol = py::cast<double>(item.second);
          else if (key == "seed") cfg.seed = py::cast<unsigned>(item.second);
          else if (key == "trials") cfg.trials = py::cast<int>(item.second);
          else if (key == "out") cfg.out_dir = py::cast<std::string>(item.second);
          else if (key == "override_check") cfg.override_check = py::cast<bool>(item.second);
          else throw ParseError("run_cli: unknown key \"" + key + "\"");
        }
        const RunOutcome outcome = run(cfg);
        return py::make_tuple(outcome.exit_code, outcome.report, outcome.files);
      },
      py::arg("config"));
}
