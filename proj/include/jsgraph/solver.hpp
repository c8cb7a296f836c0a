#pragma once

#include <memory>
#include <string>
#include <vector>

#include "jsgraph/checks.hpp"
#include "jsgraph/domain.hpp"
#include "jsgraph/mesh.hpp"

namespace jsgraph {

enum class ProblemType { minimal, cmc, translator };

struct ProblemKind {
  ProblemType type = ProblemType::minimal;
  double H0 = 0.0;  // cmc
  double c = 1.0;   // translator speed, positive

  static ProblemKind minimal() { return {ProblemType::minimal, 0.0, 0.0}; }
  static ProblemKind cmc(double H0) { return {ProblemType::cmc, H0, 0.0}; }
  static ProblemKind translator(double c);
  std::string name() const;
};

struct DirichletData {
  std::vector<double> values;       // per mesh vertex; 0 on interior nodes
  std::vector<char> is_boundary;    // per mesh vertex
  double cap = 0.0;
};

/// Boundary values: C-arc expression at the node, +cap on A arcs, -cap on B
/// arcs. At a domain vertex the C-arc data wins (the arc starting there first,
/// then the one ending there); a vertex between two blow-up arcs gets 0.
DirichletData build_dirichlet_data(const DomainSpec& spec, const TriMesh& mesh, double cap);

struct SolverConfig {
  double tol_rel = 1e-10;           // residual reduction target
  double tol_abs = 1e-13;
  int max_iterations = 50;
  double armijo_slope = 1e-4;
  double min_step = 9.5367431640625e-07;  // 2^-20
  std::vector<double> caps;         // continuation schedule; empty = 1,2,...,2^K
  int cap_levels = 5;
  double interior_margin_factor = 5.0;   // delta = factor * h
  double eps_js_rel = 1e-4;              // * domain diameter
  unsigned seed = 0;

  double monotonicity_slack(double cap) const { return 1e-8 * (1.0 + cap); }
  std::vector<double> cap_schedule() const;
};

struct Solution {
  const TriMesh* mesh = nullptr;
  std::vector<double> u;
  ProblemKind kind;
  double cap = 0.0;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string diagnostics;  // line-search stall etc.
};

/// Weak-form residual of div_sigma(grad u / W) = F with P1 elements:
/// R_i = sum_T A_T (grad u . grad phi_i)/W_T + A_T lambda^2 F_T / 3,
/// W = sqrt(1 + |grad u|^2 / lambda^2); F = 0 | H0 | c/W.
/// Entries at boundary nodes are zero. freeze_w solves the linear problem.
std::vector<double> assemble_residual(const TriMesh& mesh, const ConformalMetric& metric,
                                      const std::vector<double>& u,
                                      const std::vector<char>& is_boundary, ProblemKind kind,
                                      bool freeze_w = false);

struct SparseTriplets {
  int n = 0;  // number of free nodes
  std::vector<int> free_index;  // mesh vertex -> free index (-1 for boundary)
  std::vector<int> rows, cols;
  std::vector<double> values;
};

/// Analytic Jacobian of the residual w.r.t. the free nodal values.
SparseTriplets assemble_jacobian(const TriMesh& mesh, const ConformalMetric& metric,
                                 const std::vector<double>& u,
                                 const std::vector<char>& is_boundary, ProblemKind kind,
                                 bool freeze_w = false);

/// Damped Newton from a harmonic-extension initial guess (or the supplied
/// warm-start field); deterministic sparse LU for the linear solves.
Solution newton_solve(const TriMesh& mesh, const ConformalMetric& metric,
                      const DirichletData& data, ProblemKind kind,
                      const SolverConfig& config = {},
                      const std::vector<double>* warm_start = nullptr);

struct CapDiagnostics {
  double cap = 0.0;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  double min_increment = 0.0;          // min of u_next - u_prev over all nodes (reported)
  double min_increment_interior = 0.0; // same, away from the exceptional corner set
  double interior_delta = 0.0;         // max |u_next - u_prev| on the far-interior nodes
};

struct ContinuationResult {
  std::shared_ptr<const TriMesh> mesh;   // heap-stable: solutions point into it
  std::vector<Solution> solutions;       // one per completed cap
  std::vector<CapDiagnostics> caps;
  // Monotonicity of the capped sequence is claimed only when the boundary
  // data itself is nondecreasing between caps, i.e. when no B arc is present
  // (with B arcs the -n values drop to -2n). When applicable it is asserted
  // away from the domain vertices (the maximum principle's exceptional set);
  // the worst global increment is reported in the diagnostics either way.
  bool monotonicity_applicable = true;
  bool monotone_ok = true;
  bool js_converged = false;
  double converged_at_cap = 0.0;
  double eps_js = 0.0;
  double delta = 0.0;
  CheckReport check;
  bool aborted = false;
  std::string abort_reason;
};

/// The capped monotone continuation: solve with boundary data capped at each
/// n_k (warm started), assert nodal monotonicity, and declare convergence when
/// the far-interior increment drops below eps_js.
ContinuationResult continuation_solve(const DomainSpec& spec, ProblemKind kind,
                                      const SolverConfig& config, double h, double grading,
                                      bool override_check = false,
                                      const CheckOptions& check_opt = {});

/// Same, on a caller-provided mesh (convergence studies, structured grids).
ContinuationResult continuation_solve_on_mesh(const DomainSpec& spec, TriMesh mesh,
                                              ProblemKind kind, const SolverConfig& config,
                                              bool override_check = false,
                                              const CheckOptions& check_opt = {});

struct CompareReport {
  double min_difference = 0.0;     // min over nodes of (a - b)
  std::vector<int> violations;     // nodes with a - b < -slack
  int worst_node = -1;
  bool dominates = false;          // a >= b - slack everywhere
};

/// Nodewise ordering of two solutions on the same mesh.
CompareReport compare(const Solution& a, const Solution& b, double slack);

}  // namespace jsgraph
