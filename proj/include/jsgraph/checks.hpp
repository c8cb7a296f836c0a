#pragma once

#include <string>
#include <vector>

#include "jsgraph/domain.hpp"
#include "jsgraph/polygons.hpp"

namespace jsgraph {

struct SlackConfig {
  double strict_rel = 1e-9;    // inequality margin, relative to the domain diameter
  double equality_rel = 1e-6;  // equality residual, relative to the domain diameter
  double curvature = 1e-6;     // absolute kappa tolerance for the CMC hypotheses
};

struct CheckOptions {
  SlackConfig slack;
  EnumerateOptions enumerate;
  ValidationOptions validation;
};

struct PolygonRecord {
  std::string id;
  std::vector<int> vertices;
  bool whole_boundary = false;
  bool indeterminate = false;
  double alpha = 0, beta = 0, ell = 0, area = 0;
  double margin_alpha = 0;  // 2 alpha - ell (- H area in cmc mode); pass when < -slack
  double margin_beta = 0;   // 2 beta - ell (+ H area in cmc mode)
  bool alpha_ok = true, beta_ok = true;
  bool enforced = true;  // participates in the verdict
};

struct HypothesisRecord {
  std::string id;
  bool pass = true;
  double measured = 0, required = 0;
  std::string detail;
};

struct CheckReport {
  CheckMode mode = CheckMode::minimal;
  double H = 0.0;
  std::string domain_name;
  bool validated = false;
  std::vector<ValidationIssue> validation_issues;
  std::vector<HypothesisRecord> hypotheses;
  std::vector<PolygonRecord> polygons;
  double alpha_boundary = 0, beta_boundary = 0, area_domain = 0;
  bool equality_checked = false;
  double equality_residual = 0;  // alpha - beta (- H area) when {C} is empty
  double slack_strict = 0, slack_equality = 0;
  std::vector<std::string> notes;
  bool pass = false;
  std::string certificate;  // first failing condition, empty on pass

  std::string to_json_text() const;  // stable key order
  std::string to_csv_text() const;   // polygon records as CSV rows
};

CheckReport check_minimal(const DomainSpec& spec, const CheckOptions& opt = {});

/// Throws UnsupportedError when B arcs are present or no C arc exists
/// (the translating existence theorem presumes both).
CheckReport check_translating(const DomainSpec& spec, const CheckOptions& opt = {});

/// Euclidean metric only. Verifies Spruck's curvature hypotheses, the B-arc
/// length bound, the reflected-domain disk test, and the area-weighted
/// polygon inequalities.
CheckReport check_cmc(const DomainSpec& spec, double H, const CheckOptions& opt = {});

CheckReport run_check(const DomainSpec& spec, CheckMode mode, double H,
                      const CheckOptions& opt = {});

}  // namespace jsgraph
