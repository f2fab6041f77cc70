#pragma once

#include <array>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bimdecomp/tolerances.hpp"

namespace bimdecomp {

// A coordinate system on the spatial slice: three named coordinates with
// closed domain intervals and optional strict-positivity assumptions.
struct Chart {
  std::string name;
  std::array<std::string, 3> coords;
  std::array<double, 3> lower{0.0, 0.0, 0.0};
  std::array<double, 3> upper{1.0, 1.0, 1.0};
  std::array<bool, 3> strictly_positive{false, false, false};

  // -1 when the identifier is not a coordinate of this chart.
  int coord_index(std::string_view id) const;

  // Throws ConfigError unless: name nonempty, coordinate names distinct
  // and nonempty, lower < upper per coordinate.
  void validate() const;
};

enum class FuncId {
  Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Tanh,
  Arccos, Arcsin, Arctan, Pow,
};

enum class NodeKind { Constant, Coordinate, Parameter, Unary, Binary, Call };

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

// Immutable expression tree.  Coordinates are resolved to chart slots and
// parameters to indices at parse time, so evaluation needs no name lookup.
struct ExprNode {
  NodeKind kind{NodeKind::Constant};
  double constant{0.0};   // Constant
  int slot{-1};           // Coordinate: 0..2; Parameter: index into table
  std::string symbol;     // original identifier, kept for printing
  char op{0};             // Unary: '-'; Binary: '+','-','*','/','^'
  FuncId func{FuncId::Sin};
  std::vector<Expr> args;
};

// Parses the ansatz expression grammar:
//   expression := term (('+'|'-') term)*
//   term       := power (('*'|'/') power)*
//   power      := unary ('^' power)?          (right-associative)
//   unary      := '-' unary | primary         (unary minus binds above ^)
//   primary    := number | identifier | func '(' args ')' | '(' expression ')'
// Identifiers must be chart coordinates, declared parameters, or function
// names.  Throws SyntaxError (with byte offset) or UnknownSymbol.
Expr parse(std::string_view src, const Chart& chart,
           std::span<const std::string> params = {});

// IEEE double evaluation.  Domain violations (log of non-positive, sqrt of
// negative, arccos/arcsin outside [-1,1] beyond the clamp slack, division
// by zero) throw DomainError naming the function and the offending value.
double eval(const Expr& e, const std::array<double, 3>& point,
            std::span<const double> param_values = {},
            const ToleranceProfile& tol = {});

// Exact recursive differentiation with respect to a chart coordinate.
// Parameters differentiate to zero.
Expr diff(const Expr& e, int coord_slot);

// Fully parenthesized rendering; eval(parse(print(e))) == eval(e) bit for
// bit (constants are printed with 17 significant digits).
std::string to_string(const Expr& e);

// Which coordinate slots the expression actually references (AutoDetect).
std::array<bool, 3> referenced_coords(const Expr& e);

} // namespace bimdecomp
