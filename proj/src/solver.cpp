#include "jsgraph/solver.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "jsgraph/errors.hpp"

namespace jsgraph {

ProblemKind ProblemKind::translator(double c) {
  if (!(c > 0)) throw DomainError("translator speed c must be positive");
  return {ProblemType::translator, 0.0, c};
}

std::string ProblemKind::name() const {
  switch (type) {
    case ProblemType::minimal: return "minimal";
    case ProblemType::cmc: return "cmc";
    case ProblemType::translator: return "translator";
  }
  return "?";
}

std::vector<double> SolverConfig::cap_schedule() const {
  if (!caps.empty()) {
    for (size_t i = 1; i < caps.size(); ++i)
      if (caps[i] <= caps[i - 1]) throw DomainError("cap schedule must be strictly increasing");
    return caps;
  }
  std::vector<double> out;
  for (int k = 0; k < cap_levels; ++k) out.push_back(std::pow(2.0, k));
  return out;
}

DirichletData build_dirichlet_data(const DomainSpec& spec, const TriMesh& mesh, double cap) {
  DirichletData data;
  data.cap = cap;
  data.values.assign(mesh.vertices.size(), 0.0);
  data.is_boundary.assign(mesh.vertices.size(), 0);

  // map arc ids to arcs
  auto arc_of = [&](const std::string& id) -> const Arc& {
    for (const auto& a : spec.arcs)
      if (a.id == id) return a;
    throw DomainError("mesh references unknown arc id: " + id);
  };

  const auto verts = spec.vertices();
  const int n_arcs = static_cast<int>(spec.arcs.size());

  for (size_t i = 0; i < mesh.vertices.size(); ++i) {
    const auto& m = mesh.markers[i];
    const Vec2 p = mesh.vertices[i];
    if (m.kind == VertexMarkerKind::interior) continue;
    data.is_boundary[i] = 1;
    if (m.kind == VertexMarkerKind::on_arc) {
      const Arc& arc = arc_of(m.arc_id);
      switch (arc.kind) {
        case ArcKind::A: data.values[i] = cap; break;
        case ArcKind::B: data.values[i] = -cap; break;
        case ArcKind::C: data.values[i] = arc.data.eval(p.x, p.y); break;
      }
    } else {
      // domain vertex: match it to the domain corner, prefer the outgoing C arc
      int vi = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int k = 0; k < n_arcs; ++k) {
        const double d = dist(p, verts[k]);
        if (d < best) { best = d; vi = k; }
      }
      const Arc& outgoing = spec.arcs[vi];
      const Arc& incoming = spec.arcs[(vi + n_arcs - 1) % n_arcs];
      if (outgoing.kind == ArcKind::C) data.values[i] = outgoing.data.eval(p.x, p.y);
      else if (incoming.kind == ArcKind::C) data.values[i] = incoming.data.eval(p.x, p.y);
      else data.values[i] = 0.0;  // between two blow-up arcs
    }
  }
  return data;
}

namespace {

struct TriGeometry {
  std::array<Vec2, 3> grad_phi;
  double area;
  double lambda2;  // lambda^2 at the centroid
};

TriGeometry tri_geometry(const TriMesh& mesh, const ConformalMetric& metric,
                         const std::array<int, 3>& t) {
  const Vec2 a = mesh.vertices[t[0]], b = mesh.vertices[t[1]], c = mesh.vertices[t[2]];
  const double twice = cross(b - a, c - a);
  if (twice <= 0) throw NumericError("assembly: non-positive triangle");
  TriGeometry g;
  g.area = 0.5 * twice;
  g.grad_phi = {perp(c - b) / twice, perp(a - c) / twice, perp(b - a) / twice};
  const double lam = metric.lambda((a + b + c) / 3.0);
  g.lambda2 = lam * lam;
  return g;
}

struct Nonlinearity {
  double w;       // sqrt(1 + |grad u|^2 / lambda^2)
  Vec2 grad_u;
  double f;       // right-hand side F(W)
  double df_dw;   // dF / dW
};

Nonlinearity evaluate(const TriGeometry& g, const std::vector<double>& u,
                      const std::array<int, 3>& t, ProblemKind kind, bool freeze_w) {
  Nonlinearity n;
  n.grad_u = g.grad_phi[0] * u[t[0]] + g.grad_phi[1] * u[t[1]] + g.grad_phi[2] * u[t[2]];
  n.w = freeze_w ? 1.0 : std::sqrt(1.0 + norm2(n.grad_u) / g.lambda2);
  switch (kind.type) {
    case ProblemType::minimal:
      n.f = 0.0;
      n.df_dw = 0.0;
      break;
    case ProblemType::cmc:
      n.f = kind.H0;
      n.df_dw = 0.0;
      break;
    case ProblemType::translator:
      n.f = kind.c / n.w;
      n.df_dw = -kind.c / (n.w * n.w);
      break;
  }
  return n;
}

}  // namespace

std::vector<double> assemble_residual(const TriMesh& mesh, const ConformalMetric& metric,
                                      const std::vector<double>& u,
                                      const std::vector<char>& is_boundary, ProblemKind kind,
                                      bool freeze_w) {
  for (size_t i = 0; i < u.size(); ++i)
    if (!std::isfinite(u[i]))
      throw NumericError("assemble_residual: non-finite nodal value at node " +
                         std::to_string(i));
  std::vector<double> r(u.size(), 0.0);
  for (const auto& t : mesh.triangles) {
    const auto g = tri_geometry(mesh, metric, t);
    const auto n = evaluate(g, u, t, kind, freeze_w);
    for (int i = 0; i < 3; ++i) {
      if (is_boundary[t[i]]) continue;
      r[t[i]] += g.area * dot(n.grad_u, g.grad_phi[i]) / n.w +
                 g.area * g.lambda2 * n.f / 3.0;
    }
  }
  return r;
}

SparseTriplets assemble_jacobian(const TriMesh& mesh, const ConformalMetric& metric,
                                 const std::vector<double>& u,
                                 const std::vector<char>& is_boundary, ProblemKind kind,
                                 bool freeze_w) {
  SparseTriplets J;
  J.free_index.assign(u.size(), -1);
  for (size_t i = 0; i < u.size(); ++i)
    if (!is_boundary[i]) J.free_index[i] = J.n++;

  for (const auto& t : mesh.triangles) {
    const auto g = tri_geometry(mesh, metric, t);
    const auto n = evaluate(g, u, t, kind, freeze_w);
    const double w3 = n.w * n.w * n.w;
    for (int i = 0; i < 3; ++i) {
      const int fi = J.free_index[t[i]];
      if (fi < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const int fj = J.free_index[t[j]];
        if (fj < 0) continue;
        const double dot_ij = dot(g.grad_phi[i], g.grad_phi[j]);
        const double ui_g = dot(n.grad_u, g.grad_phi[i]);
        const double uj_g = dot(n.grad_u, g.grad_phi[j]);
        double v = g.area * dot_ij / n.w;
        if (!freeze_w) {
          v -= g.area * ui_g * uj_g / (g.lambda2 * w3);
          if (n.df_dw != 0.0) {
            // dW/du_j = (grad u . grad phi_j) / (lambda^2 W)
            v += g.area * g.lambda2 * n.df_dw * uj_g / (g.lambda2 * n.w) / 3.0;
          }
        }
        J.rows.push_back(fi);
        J.cols.push_back(fj);
        J.values.push_back(v);
      }
    }
  }
  return J;
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;

SpMat to_eigen(const SparseTriplets& J) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(J.values.size());
  for (size_t k = 0; k < J.values.size(); ++k)
    trip.emplace_back(J.rows[k], J.cols[k], J.values[k]);
  SpMat m(J.n, J.n);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

double free_norm(const std::vector<double>& r, const std::vector<char>& is_boundary) {
  double s = 0.0;
  for (size_t i = 0; i < r.size(); ++i)
    if (!is_boundary[i]) s += r[i] * r[i];
  return std::sqrt(s);
}

}  // namespace

Solution newton_solve(const TriMesh& mesh, const ConformalMetric& metric,
                      const DirichletData& data, ProblemKind kind,
                      const SolverConfig& config, const std::vector<double>* warm_start) {
  Solution sol;
  sol.mesh = &mesh;
  sol.kind = kind;
  sol.cap = data.cap;
  sol.u = data.values;

  const auto& bdry = data.is_boundary;
  if (warm_start) {
    if (warm_start->size() != sol.u.size())
      throw DomainError("newton_solve: warm start has the wrong size");
    for (size_t i = 0; i < sol.u.size(); ++i)
      if (!bdry[i]) sol.u[i] = (*warm_start)[i];
  }

  // initial guess: harmonic extension of the boundary data (one linear solve)
  if (!warm_start) {
    const auto r0 = assemble_residual(mesh, metric, sol.u, bdry, ProblemKind::minimal(),
                                      /*freeze_w=*/true);
    if (free_norm(r0, bdry) > 0) {
      const auto J = assemble_jacobian(mesh, metric, sol.u, bdry, ProblemKind::minimal(),
                                       /*freeze_w=*/true);
      Eigen::SparseLU<SpMat> lu;
      lu.compute(to_eigen(J));
      if (lu.info() != Eigen::Success)
        throw NumericError("newton_solve: singular Laplace system for the initial guess");
      Eigen::VectorXd rhs(J.n);
      for (size_t i = 0; i < sol.u.size(); ++i)
        if (J.free_index[i] >= 0) rhs[J.free_index[i]] = r0[i];
      const Eigen::VectorXd du = lu.solve(rhs);
      for (size_t i = 0; i < sol.u.size(); ++i)
        if (J.free_index[i] >= 0) sol.u[i] -= du[J.free_index[i]];
    }
  }

  auto residual = [&](const std::vector<double>& u) {
    return assemble_residual(mesh, metric, u, bdry, kind);
  };

  std::vector<double> r = residual(sol.u);
  double rnorm = free_norm(r, bdry);
  const double r0norm = rnorm;
  const double target = std::max(config.tol_rel * r0norm, config.tol_abs);

  if (rnorm <= target) {
    sol.converged = true;
    sol.residual_norm = rnorm;
    return sol;
  }

  for (int it = 1; it <= config.max_iterations; ++it) {
    const auto J = assemble_jacobian(mesh, metric, sol.u, bdry, kind);
    Eigen::SparseLU<SpMat> lu;
    lu.compute(to_eigen(J));
    if (lu.info() != Eigen::Success)
      throw NumericError("newton_solve: singular Jacobian at iteration " + std::to_string(it));
    Eigen::VectorXd rhs(J.n);
    for (size_t i = 0; i < sol.u.size(); ++i)
      if (J.free_index[i] >= 0) rhs[J.free_index[i]] = r[i];
    const Eigen::VectorXd du = lu.solve(rhs);

    // Armijo backtracking on 1/2 ||r||^2 (Newton direction: slope = -||r||^2)
    const double f0 = 0.5 * rnorm * rnorm;
    double step = 1.0;
    std::vector<double> u_trial(sol.u.size());
    bool accepted = false;
    double best_f = f0;
    std::vector<double> best_u, best_r;
    while (step >= config.min_step) {
      for (size_t i = 0; i < sol.u.size(); ++i) {
        u_trial[i] = sol.u[i];
        if (J.free_index[i] >= 0) u_trial[i] -= step * du[J.free_index[i]];
      }
      std::vector<double> r_trial;
      double f_trial = std::numeric_limits<double>::infinity();
      try {
        r_trial = residual(u_trial);
        const double n = free_norm(r_trial, bdry);
        f_trial = 0.5 * n * n;
      } catch (const NumericError&) {
        // step left the metric's definition set or overflowed; shrink
      }
      if (f_trial <= f0 - config.armijo_slope * step * rnorm * rnorm) {
        sol.u.swap(u_trial);
        r.swap(r_trial);
        rnorm = std::sqrt(2.0 * f_trial);
        accepted = true;
        break;
      }
      if (f_trial < best_f) {
        best_f = f_trial;
        best_u = u_trial;
        best_r = r_trial;
      }
      step *= 0.5;
    }
    sol.iterations = it;
    if (!accepted && best_f < f0) {
      // fall back on plain decrease when the Armijo slope is unreachable
      sol.u.swap(best_u);
      r.swap(best_r);
      rnorm = std::sqrt(2.0 * best_f);
      accepted = true;
    }
    if (!accepted) {
      sol.converged = false;
      sol.residual_norm = rnorm;
      sol.diagnostics = "line search stalled below the minimum step at iteration " +
                        std::to_string(it);
      return sol;
    }
    if (rnorm <= target) {
      sol.converged = true;
      sol.residual_norm = rnorm;
      return sol;
    }
  }
  sol.converged = false;
  sol.residual_norm = rnorm;
  sol.diagnostics = "newton iteration budget exhausted";
  return sol;
}

ContinuationResult continuation_solve(const DomainSpec& spec, ProblemKind kind,
                                      const SolverConfig& config, double h, double grading,
                                      bool override_check, const CheckOptions& check_opt) {
  ContinuationResult result;
  switch (kind.type) {
    case ProblemType::minimal: result.check = check_minimal(spec, check_opt); break;
    case ProblemType::translator: result.check = check_translating(spec, check_opt); break;
    case ProblemType::cmc: result.check = check_cmc(spec, kind.H0, check_opt); break;
  }
  if (!result.check.pass && !override_check) {
    result.aborted = true;
    result.abort_reason = "structural check failed: " + result.check.certificate;
    return result;
  }
  ContinuationResult run = continuation_solve_on_mesh(spec, generate_mesh(spec, h, grading),
                                                      kind, config, override_check, check_opt);
  return run;
}

ContinuationResult continuation_solve_on_mesh(const DomainSpec& spec, TriMesh mesh_in,
                                              ProblemKind kind, const SolverConfig& config,
                                              bool override_check,
                                              const CheckOptions& check_opt) {
  ContinuationResult result;

  switch (kind.type) {
    case ProblemType::minimal: result.check = check_minimal(spec, check_opt); break;
    case ProblemType::translator: result.check = check_translating(spec, check_opt); break;
    case ProblemType::cmc: result.check = check_cmc(spec, kind.H0, check_opt); break;
  }
  if (!result.check.pass && !override_check) {
    result.aborted = true;
    result.abort_reason = "structural check failed: " + result.check.certificate;
    return result;
  }

  result.mesh = std::make_shared<TriMesh>(std::move(mesh_in));
  const TriMesh& mesh = *result.mesh;
  const double h = mesh.h_nominal > 0 ? mesh.h_nominal : spec.diameter() / 16.0;
  result.delta = config.interior_margin_factor * h;
  result.monotonicity_applicable = !spec.has_kind(ArcKind::B);
  result.eps_js = config.eps_js_rel * spec.diameter();

  // nodes at distance >= delta from every blow-up arc
  std::vector<char> far_interior(mesh.vertices.size(), 1);
  {
    std::vector<Vec2> blowup;
    for (const auto& arc : spec.arcs) {
      if (arc.kind == ArcKind::C) continue;
      const auto pts = arc.geometry.polyline(256);
      blowup.insert(blowup.end(), pts.begin(), pts.end());
    }
    for (size_t i = 0; i < mesh.vertices.size(); ++i) {
      for (const auto& q : blowup)
        if (dist(mesh.vertices[i], q) < result.delta) { far_interior[i] = 0; break; }
    }
  }
  const bool have_far_nodes =
      std::any_of(far_interior.begin(), far_interior.end(), [](char c) { return c != 0; });

  // the exceptional set of the maximum principle: disks around domain vertices
  std::vector<char> near_corner(mesh.vertices.size(), 0);
  {
    const auto corners = spec.vertices();
    for (size_t i = 0; i < mesh.vertices.size(); ++i)
      for (const auto& c : corners)
        if (dist(mesh.vertices[i], c) < result.delta) { near_corner[i] = 1; break; }
  }

  const auto schedule = config.cap_schedule();
  std::vector<double> warm;
  for (const double cap : schedule) {
    const DirichletData data = build_dirichlet_data(spec, mesh, cap);
    Solution sol = newton_solve(mesh, spec.metric, data, kind, config,
                                warm.empty() ? nullptr : &warm);

    CapDiagnostics diag;
    diag.cap = cap;
    diag.iterations = sol.iterations;
    diag.residual = sol.residual_norm;
    diag.converged = sol.converged;

    if (!warm.empty()) {
      double min_inc = std::numeric_limits<double>::infinity();
      double min_inc_interior = std::numeric_limits<double>::infinity();
      double interior_delta = 0.0;
      for (size_t i = 0; i < sol.u.size(); ++i) {
        const double inc = sol.u[i] - warm[i];
        min_inc = std::min(min_inc, inc);
        if (!near_corner[i]) min_inc_interior = std::min(min_inc_interior, inc);
        if (far_interior[i]) interior_delta = std::max(interior_delta, std::abs(inc));
      }
      diag.min_increment = min_inc;
      diag.min_increment_interior = min_inc_interior;
      diag.interior_delta = interior_delta;
      if (result.monotonicity_applicable &&
          min_inc_interior < -config.monotonicity_slack(cap))
        result.monotone_ok = false;
      if (sol.converged && have_far_nodes && !result.js_converged &&
          interior_delta < result.eps_js) {
        result.js_converged = true;
        result.converged_at_cap = cap;
      }
    }
    result.caps.push_back(diag);
    result.solutions.push_back(sol);
    if (!sol.converged) {
      result.aborted = true;
      result.abort_reason = "solver did not converge at cap " + std::to_string(cap) +
                            (sol.diagnostics.empty() ? "" : (": " + sol.diagnostics));
      return result;
    }
    warm = result.solutions.back().u;
  }
  return result;
}

CompareReport compare(const Solution& a, const Solution& b, double slack) {
  if (a.u.size() != b.u.size())
    throw DomainError("compare: solutions live on different meshes");
  if (a.mesh && b.mesh && a.mesh != b.mesh) {
    const auto& va = a.mesh->vertices;
    const auto& vb = b.mesh->vertices;
    if (va.size() != vb.size())
      throw DomainError("compare: solutions live on different meshes");
    for (size_t i = 0; i < va.size(); ++i)
      if (va[i].x != vb[i].x || va[i].y != vb[i].y)
        throw DomainError("compare: solutions live on different meshes");
  }
  CompareReport rep;
  rep.min_difference = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < a.u.size(); ++i) {
    const double d = a.u[i] - b.u[i];
    if (d < rep.min_difference) {
      rep.min_difference = d;
      if (d < -slack) rep.worst_node = static_cast<int>(i);
    }
    if (d < -slack) rep.violations.push_back(static_cast<int>(i));
  }
  rep.dominates = rep.violations.empty();
  return rep;
}

}  // namespace jsgraph
