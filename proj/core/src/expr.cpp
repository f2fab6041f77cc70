#include "bimdecomp/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>

#include "bimdecomp/errors.hpp"

namespace bimdecomp {

int Chart::coord_index(std::string_view id) const {
  for (int i = 0; i < 3; ++i)
    if (coords[static_cast<std::size_t>(i)] == id) return i;
  return -1;
}

void Chart::validate() const {
  if (name.empty()) throw ConfigError("chart: name must be nonempty");
  for (int i = 0; i < 3; ++i) {
    const auto& c = coords[static_cast<std::size_t>(i)];
    if (c.empty()) throw ConfigError("chart: coordinate name must be nonempty");
    if (!(lower[static_cast<std::size_t>(i)] < upper[static_cast<std::size_t>(i)]))
      throw ConfigError("chart: bounds of '" + c + "' need lower < upper");
  }
  if (coords[0] == coords[1] || coords[0] == coords[2] || coords[1] == coords[2])
    throw ConfigError("chart: coordinate names must be distinct");
}

namespace {

struct FuncSpec {
  FuncId id;
  int arity;
};

const std::map<std::string, FuncSpec, std::less<>>& function_table() {
  static const std::map<std::string, FuncSpec, std::less<>> table = {
      {"sin", {FuncId::Sin, 1}},       {"cos", {FuncId::Cos, 1}},
      {"tan", {FuncId::Tan, 1}},       {"exp", {FuncId::Exp, 1}},
      {"log", {FuncId::Log, 1}},       {"sqrt", {FuncId::Sqrt, 1}},
      {"sinh", {FuncId::Sinh, 1}},     {"cosh", {FuncId::Cosh, 1}},
      {"tanh", {FuncId::Tanh, 1}},     {"arccos", {FuncId::Arccos, 1}},
      {"arcsin", {FuncId::Arcsin, 1}}, {"arctan", {FuncId::Arctan, 1}},
      {"pow", {FuncId::Pow, 2}},
  };
  return table;
}

const char* func_name(FuncId id) {
  switch (id) {
    case FuncId::Sin: return "sin";
    case FuncId::Cos: return "cos";
    case FuncId::Tan: return "tan";
    case FuncId::Exp: return "exp";
    case FuncId::Log: return "log";
    case FuncId::Sqrt: return "sqrt";
    case FuncId::Sinh: return "sinh";
    case FuncId::Cosh: return "cosh";
    case FuncId::Tanh: return "tanh";
    case FuncId::Arccos: return "arccos";
    case FuncId::Arcsin: return "arcsin";
    case FuncId::Arctan: return "arctan";
    case FuncId::Pow: return "pow";
  }
  return "?";
}

Expr make_constant(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::Constant;
  n->constant = v;
  return n;
}

Expr make_coordinate(int slot, std::string sym) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::Coordinate;
  n->slot = slot;
  n->symbol = std::move(sym);
  return n;
}

Expr make_parameter(int slot, std::string sym) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::Parameter;
  n->slot = slot;
  n->symbol = std::move(sym);
  return n;
}

Expr make_unary(Expr a) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::Unary;
  n->op = '-';
  n->args = {std::move(a)};
  return n;
}

Expr make_binary(char op, Expr a, Expr b) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::Binary;
  n->op = op;
  n->args = {std::move(a), std::move(b)};
  return n;
}

Expr make_call(FuncId f, std::vector<Expr> args) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::Call;
  n->func = f;
  n->args = std::move(args);
  return n;
}

bool is_const(const Expr& e, double v) {
  return e->kind == NodeKind::Constant && e->constant == v;
}

// Folding constructors used by diff only; parse keeps trees verbatim.
Expr d_add(Expr a, Expr b) {
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  if (a->kind == NodeKind::Constant && b->kind == NodeKind::Constant)
    return make_constant(a->constant + b->constant);
  return make_binary('+', std::move(a), std::move(b));
}

Expr d_sub(Expr a, Expr b) {
  if (is_const(b, 0.0)) return a;
  if (a->kind == NodeKind::Constant && b->kind == NodeKind::Constant)
    return make_constant(a->constant - b->constant);
  if (is_const(a, 0.0)) return make_unary(std::move(b));
  return make_binary('-', std::move(a), std::move(b));
}

Expr d_mul(Expr a, Expr b) {
  if (is_const(a, 0.0) || is_const(b, 0.0)) return make_constant(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  if (a->kind == NodeKind::Constant && b->kind == NodeKind::Constant)
    return make_constant(a->constant * b->constant);
  return make_binary('*', std::move(a), std::move(b));
}

Expr d_div(Expr a, Expr b) {
  if (is_const(a, 0.0)) return make_constant(0.0);
  if (is_const(b, 1.0)) return a;
  return make_binary('/', std::move(a), std::move(b));
}

Expr d_neg(Expr a) {
  if (a->kind == NodeKind::Constant) return make_constant(-a->constant);
  return make_unary(std::move(a));
}

Expr d_pow(Expr a, Expr b) {
  if (is_const(b, 1.0)) return a;
  if (is_const(b, 0.0)) return make_constant(1.0);
  return make_binary('^', std::move(a), std::move(b));
}

Expr d_call(FuncId f, std::vector<Expr> args) { return make_call(f, std::move(args)); }

// ---- tokenizer ----------------------------------------------------------

enum class Tok { Number, Ident, Op, LParen, RParen, Comma, End };

struct Token {
  Tok kind;
  std::size_t pos;
  double number{0.0};
  std::string ident;
  char op{0};
};

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
    Token t;
    t.pos = i_;
    if (i_ >= src_.size()) {
      t.kind = Tok::End;
      return t;
    }
    const char c = src_[i_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = src_.data() + i_;
      char* end = nullptr;
      t.number = std::strtod(begin, &end);
      if (end == begin)
        throw SyntaxError("syntax error at offset " + std::to_string(i_) +
                              ": malformed number",
                          i_);
      i_ += static_cast<std::size_t>(end - begin);
      t.kind = Tok::Number;
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i_;
      while (j < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_'))
        ++j;
      t.kind = Tok::Ident;
      t.ident = std::string(src_.substr(i_, j - i_));
      i_ = j;
      return t;
    }
    ++i_;
    switch (c) {
      case '(': t.kind = Tok::LParen; return t;
      case ')': t.kind = Tok::RParen; return t;
      case ',': t.kind = Tok::Comma; return t;
      case '+': case '-': case '*': case '/': case '^':
        t.kind = Tok::Op;
        t.op = c;
        return t;
      default:
        throw SyntaxError("syntax error at offset " + std::to_string(t.pos) +
                              ": unexpected character '" + std::string(1, c) +
                              "', expected number, identifier, operator or parenthesis",
                          t.pos);
    }
  }

private:
  std::string_view src_;
  std::size_t i_ = 0;
};

class Parser {
public:
  Parser(std::string_view src, const Chart& chart, std::span<const std::string> params)
      : lex_(src), chart_(chart), params_(params) {
    advance();
  }

  Expr run() {
    Expr e = expression();
    if (cur_.kind != Tok::End)
      throw SyntaxError("syntax error at offset " + std::to_string(cur_.pos) +
                            ": expected operator or end of input",
                        cur_.pos);
    return e;
  }

private:
  void advance() { cur_ = lex_.next(); }

  Expr expression() {
    Expr e = term();
    while (cur_.kind == Tok::Op && (cur_.op == '+' || cur_.op == '-')) {
      const char op = cur_.op;
      advance();
      e = make_binary(op, std::move(e), term());
    }
    return e;
  }

  Expr term() {
    Expr e = power();
    while (cur_.kind == Tok::Op && (cur_.op == '*' || cur_.op == '/')) {
      const char op = cur_.op;
      advance();
      e = make_binary(op, std::move(e), power());
    }
    return e;
  }

  Expr power() {
    Expr base = unary();
    if (cur_.kind == Tok::Op && cur_.op == '^') {
      advance();
      return make_binary('^', std::move(base), power());
    }
    return base;
  }

  Expr unary() {
    if (cur_.kind == Tok::Op && cur_.op == '-') {
      advance();
      return make_unary(unary());
    }
    return primary();
  }

  Expr primary() {
    switch (cur_.kind) {
      case Tok::Number: {
        Expr e = make_constant(cur_.number);
        advance();
        return e;
      }
      case Tok::LParen: {
        advance();
        Expr e = expression();
        expect_rparen();
        return e;
      }
      case Tok::Ident: {
        const std::string id = cur_.ident;
        const std::size_t pos = cur_.pos;
        advance();
        if (cur_.kind == Tok::LParen) {
          const auto it = function_table().find(id);
          if (it == function_table().end())
            throw UnknownSymbol("unknown function '" + id + "' at offset " +
                                std::to_string(pos));
          advance();
          std::vector<Expr> args;
          args.push_back(expression());
          while (cur_.kind == Tok::Comma) {
            advance();
            args.push_back(expression());
          }
          expect_rparen();
          if (static_cast<int>(args.size()) != it->second.arity)
            throw SyntaxError("syntax error at offset " + std::to_string(pos) +
                                  ": function '" + id + "' takes " +
                                  std::to_string(it->second.arity) + " argument(s)",
                              pos);
          return make_call(it->second.id, std::move(args));
        }
        const int ci = chart_.coord_index(id);
        if (ci >= 0) return make_coordinate(ci, id);
        for (std::size_t p = 0; p < params_.size(); ++p)
          if (params_[p] == id) return make_parameter(static_cast<int>(p), id);
        throw UnknownSymbol("unknown symbol '" + id + "' at offset " +
                            std::to_string(pos) +
                            " (not a coordinate of chart '" + chart_.name +
                            "' nor a declared parameter)");
      }
      default:
        throw SyntaxError("syntax error at offset " + std::to_string(cur_.pos) +
                              ": expected number, identifier, '-' or '('",
                          cur_.pos);
    }
  }

  void expect_rparen() {
    if (cur_.kind != Tok::RParen)
      throw SyntaxError("syntax error at offset " + std::to_string(cur_.pos) +
                            ": expected ')'",
                        cur_.pos);
    advance();
  }

  Lexer lex_;
  Token cur_;
  const Chart& chart_;
  std::span<const std::string> params_;
};

[[noreturn]] void domain_error(const char* fn, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  throw DomainError(std::string("domain error: ") + fn + " of " + buf);
}

double eval_call(FuncId f, double x, double y, const ToleranceProfile& tol) {
  switch (f) {
    case FuncId::Sin: return std::sin(x);
    case FuncId::Cos: return std::cos(x);
    case FuncId::Tan: return std::tan(x);
    case FuncId::Exp: return std::exp(x);
    case FuncId::Log:
      if (x <= 0.0) domain_error("log", x);
      return std::log(x);
    case FuncId::Sqrt:
      if (x < 0.0) domain_error("sqrt", x);
      return std::sqrt(x);
    case FuncId::Sinh: return std::sinh(x);
    case FuncId::Cosh: return std::cosh(x);
    case FuncId::Tanh: return std::tanh(x);
    case FuncId::Arccos:
      if (x > 1.0 || x < -1.0) {
        if (x > 1.0 + tol.clamp_slack || x < -1.0 - tol.clamp_slack)
          domain_error("arccos", x);
        x = (x > 0.0) ? 1.0 : -1.0;
      }
      return std::acos(x);
    case FuncId::Arcsin:
      if (x > 1.0 || x < -1.0) {
        if (x > 1.0 + tol.clamp_slack || x < -1.0 - tol.clamp_slack)
          domain_error("arcsin", x);
        x = (x > 0.0) ? 1.0 : -1.0;
      }
      return std::asin(x);
    case FuncId::Arctan: return std::atan(x);
    case FuncId::Pow: {
      const double r = std::pow(x, y);
      if (!std::isfinite(r)) domain_error("pow", x);
      return r;
    }
  }
  return 0.0;
}

} // namespace

Expr parse(std::string_view src, const Chart& chart,
           std::span<const std::string> params) {
  if (src.empty()) throw SyntaxError("syntax error at offset 0: empty expression", 0);
  return Parser(src, chart, params).run();
}

double eval(const Expr& e, const std::array<double, 3>& point,
            std::span<const double> param_values, const ToleranceProfile& tol) {
  switch (e->kind) {
    case NodeKind::Constant: return e->constant;
    case NodeKind::Coordinate: return point[static_cast<std::size_t>(e->slot)];
    case NodeKind::Parameter: {
      if (e->slot < 0 || static_cast<std::size_t>(e->slot) >= param_values.size())
        throw UnknownSymbol("parameter '" + e->symbol + "' has no bound value");
      return param_values[static_cast<std::size_t>(e->slot)];
    }
    case NodeKind::Unary: return -eval(e->args[0], point, param_values, tol);
    case NodeKind::Binary: {
      const double a = eval(e->args[0], point, param_values, tol);
      const double b = eval(e->args[1], point, param_values, tol);
      switch (e->op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/':
          if (b == 0.0) domain_error("divide", b);
          return a / b;
        case '^': {
          const double r = std::pow(a, b);
          if (!std::isfinite(r)) domain_error("pow", a);
          return r;
        }
      }
      return 0.0;
    }
    case NodeKind::Call: {
      const double x = eval(e->args[0], point, param_values, tol);
      const double y =
          (e->args.size() > 1) ? eval(e->args[1], point, param_values, tol) : 0.0;
      return eval_call(e->func, x, y, tol);
    }
  }
  return 0.0;
}

Expr diff(const Expr& e, int coord_slot) {
  switch (e->kind) {
    case NodeKind::Constant:
    case NodeKind::Parameter:
      return make_constant(0.0);
    case NodeKind::Coordinate:
      return make_constant(e->slot == coord_slot ? 1.0 : 0.0);
    case NodeKind::Unary:
      return d_neg(diff(e->args[0], coord_slot));
    case NodeKind::Binary: {
      const Expr& u = e->args[0];
      const Expr& v = e->args[1];
      Expr du = diff(u, coord_slot);
      Expr dv = diff(v, coord_slot);
      switch (e->op) {
        case '+': return d_add(std::move(du), std::move(dv));
        case '-': return d_sub(std::move(du), std::move(dv));
        case '*':
          return d_add(d_mul(std::move(du), v), d_mul(u, std::move(dv)));
        case '/':
          // (u/v)' = u'/v - u v'/v^2
          return d_sub(d_div(std::move(du), v),
                       d_div(d_mul(u, std::move(dv)), d_pow(v, make_constant(2.0))));
        case '^': {
          if (v->kind == NodeKind::Constant) {
            // c u^(c-1) u' stays valid for negative bases.
            return d_mul(d_mul(make_constant(v->constant),
                               d_pow(u, make_constant(v->constant - 1.0))),
                         std::move(du));
          }
          // u^v (v' log u + v u'/u)
          Expr t = d_add(d_mul(std::move(dv), d_call(FuncId::Log, {u})),
                         d_div(d_mul(v, std::move(du)), u));
          return d_mul(d_pow(u, v), std::move(t));
        }
      }
      return make_constant(0.0);
    }
    case NodeKind::Call: {
      const Expr& u = e->args[0];
      Expr du = diff(u, coord_slot);
      switch (e->func) {
        case FuncId::Sin: return d_mul(d_call(FuncId::Cos, {u}), std::move(du));
        case FuncId::Cos: return d_neg(d_mul(d_call(FuncId::Sin, {u}), std::move(du)));
        case FuncId::Tan:
          return d_div(std::move(du),
                       d_pow(d_call(FuncId::Cos, {u}), make_constant(2.0)));
        case FuncId::Exp: return d_mul(d_call(FuncId::Exp, {u}), std::move(du));
        case FuncId::Log: return d_div(std::move(du), u);
        case FuncId::Sqrt:
          return d_div(std::move(du),
                       d_mul(make_constant(2.0), d_call(FuncId::Sqrt, {u})));
        case FuncId::Sinh: return d_mul(d_call(FuncId::Cosh, {u}), std::move(du));
        case FuncId::Cosh: return d_mul(d_call(FuncId::Sinh, {u}), std::move(du));
        case FuncId::Tanh:
          return d_div(std::move(du),
                       d_pow(d_call(FuncId::Cosh, {u}), make_constant(2.0)));
        case FuncId::Arccos:
          return d_neg(d_div(std::move(du),
                             d_call(FuncId::Sqrt,
                                    {d_sub(make_constant(1.0),
                                           d_pow(u, make_constant(2.0)))})));
        case FuncId::Arcsin:
          return d_div(std::move(du),
                       d_call(FuncId::Sqrt, {d_sub(make_constant(1.0),
                                                   d_pow(u, make_constant(2.0)))}));
        case FuncId::Arctan:
          return d_div(std::move(du),
                       d_add(make_constant(1.0), d_pow(u, make_constant(2.0))));
        case FuncId::Pow: {
          // delegate to the '^' rule
          Expr as_pow = make_binary('^', e->args[0], e->args[1]);
          return diff(as_pow, coord_slot);
        }
      }
      return make_constant(0.0);
    }
  }
  return make_constant(0.0);
}

std::string to_string(const Expr& e) {
  switch (e->kind) {
    case NodeKind::Constant: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", e->constant);
      if (e->constant < 0.0) return "(" + std::string(buf) + ")";
      return buf;
    }
    case NodeKind::Coordinate:
    case NodeKind::Parameter:
      return e->symbol;
    case NodeKind::Unary:
      return "(-" + to_string(e->args[0]) + ")";
    case NodeKind::Binary:
      return "(" + to_string(e->args[0]) + std::string(1, e->op) +
             to_string(e->args[1]) + ")";
    case NodeKind::Call: {
      std::string s = func_name(e->func);
      s += "(";
      for (std::size_t i = 0; i < e->args.size(); ++i) {
        if (i) s += ",";
        s += to_string(e->args[i]);
      }
      s += ")";
      return s;
    }
  }
  return "";
}

namespace {
void collect_coords(const Expr& e, std::array<bool, 3>& used) {
  if (e->kind == NodeKind::Coordinate) used[static_cast<std::size_t>(e->slot)] = true;
  for (const Expr& a : e->args) collect_coords(a, used);
}
} // namespace

std::array<bool, 3> referenced_coords(const Expr& e) {
  std::array<bool, 3> used{false, false, false};
  collect_coords(e, used);
  return used;
}

} // namespace bimdecomp
