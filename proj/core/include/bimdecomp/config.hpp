#pragma once

#include <array>
#include <string>
#include <vector>

#include "bimdecomp/expr.hpp"
#include "bimdecomp/lorentz_frame.hpp"
#include "bimdecomp/tolerances.hpp"

namespace bimdecomp {

// One ansatz entry: the source string from the config plus its parsed tree.
struct ExprField {
  std::string src;
  Expr ast;
};

// Fully parsed and validated run configuration.  Every expression is
// parsed eagerly at load time so syntax errors surface before any
// computation starts.
struct AnsatzConfig {
  Chart chart;
  std::array<int, 3> points{1, 1, 1};
  int ghosts = 2;

  std::vector<std::string> param_names;
  std::vector<double> param_values;

  ExprField phi_g, phi_f;
  // Upper-triangle conformal vielbein entries in the order
  // 11,12,13,22,23,33 (lower-triangle keys are rejected at load).
  std::array<ExprField, 6> g_vielbein_conf, f_vielbein_conf;
  std::array<ExprField, 3> p, q;
  std::array<ExprField, 9> g_a_ud, f_a_ud;  // row-major 11..33
  std::array<ExprField, 3> g_lambda, f_lambda;
  ExprField alpha_g, alpha_f, kbar_g, kbar_f;

  // Background metrics; default to the constant flat metric delta_ij when
  // the block is absent (curvilinear charts spell the flat form out as
  // expressions instead).
  std::array<ExprField, 6> bg_g, bg_f, bg_h;

  SqrtAlgorithm sqrt_algorithm = SqrtAlgorithm::ClosedForm;
  std::array<bool, 3> geometry_of{true, true, false};  // g, f, h
  ToleranceProfile tol;

  // Coordinates never referenced by any ansatz expression (reported, not
  // an error).
  std::vector<std::string> unused_coordinates;

  std::string raw_text;  // config file contents, echoed into exports
};

const char* to_string(SqrtAlgorithm a);

// Parses the line-oriented `section.key = value` format.  Expression
// values are double-quoted; lists are comma separated.  Unknown keys,
// duplicates, missing keys and vielbein lower-triangle keys are
// ConfigErrors naming the key; expression syntax errors are forwarded
// with the key as context.
AnsatzConfig parse_config_text(const std::string& text);

// Reads the file and parses it; throws IoError when unreadable.
AnsatzConfig load_config(const std::string& path);

} // namespace bimdecomp
