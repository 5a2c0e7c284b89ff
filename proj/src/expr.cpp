#include "accr/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>

#include "accr/errors.hpp"

namespace accr {

ConstantBindings::ConstantBindings(std::initializer_list<std::pair<const std::string, double>> init) {
  for (const auto& [name, value] : init) bind(name, value);
}

void ConstantBindings::bind(const std::string& name, double value) {
  if (contains(name)) throw Error("constant '" + name + "' bound twice");
  set(name, value);
}

void ConstantBindings::set(const std::string& name, double value) {
  if (!std::isfinite(value)) throw Error("constant '" + name + "' is not finite");
  values_[name] = value;
}

double ConstantBindings::at(const std::string& name) const {
  auto it = values_.find(name);
  if (it == values_.end()) throw UnknownIdentifier(name);
  return it->second;
}

namespace ast {

NodePtr number(double value) { return std::make_shared<const Node>(Node{Number{value}}); }
NodePtr coord(int index) { return std::make_shared<const Node>(Node{CoordRef{index}}); }
NodePtr constant(std::string name) { return std::make_shared<const Node>(Node{ConstRef{std::move(name)}}); }
NodePtr neg(NodePtr operand) { return std::make_shared<const Node>(Node{Negate{std::move(operand)}}); }
NodePtr binary(BinaryOp op, NodePtr lhs, NodePtr rhs) {
  return std::make_shared<const Node>(Node{Binary{op, std::move(lhs), std::move(rhs)}});
}
NodePtr power(NodePtr base, NodePtr exponent) {
  return std::make_shared<const Node>(Node{Power{std::move(base), std::move(exponent)}});
}
NodePtr call(Func func, NodePtr arg) { return std::make_shared<const Node>(Node{Call{func, std::move(arg)}}); }

}  // namespace ast

namespace {

using namespace ast;

constexpr Func kFuncs[] = {Func::Sin, Func::Cos, Func::Tan, Func::Exp,
                           Func::Ln,  Func::Sqrt, Func::Abs, Func::Tanh};

bool lookup_func(std::string_view name, Func& out) {
  for (Func f : kFuncs) {
    if (name == func_name(f)) {
      out = f;
      return true;
    }
  }
  return false;
}

class Parser {
 public:
  Parser(std::string_view src, std::span<const std::string> coords, std::span<const std::string> constants)
      : src_(src), coords_(coords), constants_(constants) {}

  NodePtr parse() {
    skip_ws();
    if (pos_ == src_.size()) throw SyntaxError("empty expression", pos_);
    NodePtr e = expr();
    skip_ws();
    if (pos_ != src_.size()) throw SyntaxError("unexpected character", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = binary(BinaryOp::Add, lhs, term());
      } else if (accept('-')) {
        lhs = binary(BinaryOp::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = binary(BinaryOp::Mul, lhs, factor());
      } else if (accept('/')) {
        lhs = binary(BinaryOp::Div, lhs, factor());
      } else {
        return lhs;
      }
    }
  }

  NodePtr factor() {
    if (accept('-')) return neg(factor());
    return power_expr();
  }

  NodePtr power_expr() {
    NodePtr base = atom();
    if (accept('^')) return power(base, factor());
    return base;
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ == src_.size()) throw SyntaxError("unexpected end of input", pos_);
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      if (!accept(')')) throw SyntaxError("expected ')'", pos_);
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number_literal();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw SyntaxError(std::string("unexpected character '") + c + "'", pos_);
  }

  NodePtr number_literal() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw SyntaxError("malformed number", start);
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      const std::size_t save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) throw SyntaxError("malformed exponent", save);
    }
    double value = 0.0;
    const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (res.ec != std::errc() || res.ptr != src_.data() + pos_) throw SyntaxError("malformed number", start);
    return number(value);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    Func f{};
    if (lookup_func(name, f)) {
      if (!accept('(')) throw SyntaxError("expected '(' after function name", pos_);
      NodePtr arg = expr();
      if (!accept(')')) throw SyntaxError("expected ')'", pos_);
      return call(f, arg);
    }
    for (std::size_t i = 0; i < coords_.size(); ++i)
      if (coords_[i] == name) return coord(static_cast<int>(i));
    for (const auto& c : constants_)
      if (c == name) return constant(std::string(name));
    throw UnknownIdentifier(std::string(name));
  }

  std::string_view src_;
  std::span<const std::string> coords_;
  std::span<const std::string> constants_;
  std::size_t pos_ = 0;
};

// Exponent that is an integer literal (possibly negated) is expanded by
// repeated multiplication.
bool integer_exponent(const Node& e, long& out) {
  double v = 0.0;
  if (const auto* num = std::get_if<Number>(&e.v)) {
    v = num->value;
  } else if (const auto* n = std::get_if<Negate>(&e.v)) {
    const auto* inner = std::get_if<Number>(&n->operand->v);
    if (!inner) return false;
    v = -inner->value;
  } else {
    return false;
  }
  if (std::floor(v) != v || std::abs(v) > 1e9) return false;
  out = static_cast<long>(v);
  return true;
}

double apply_number(Func f, double x) {
  switch (f) {
    case Func::Sin: return std::sin(x);
    case Func::Cos: return std::cos(x);
    case Func::Tan:
      if (std::cos(x) == 0.0) throw DomainError("tan at a pole");
      return std::tan(x);
    case Func::Exp: return std::exp(x);
    case Func::Ln:
      if (x <= 0.0) throw DomainError("ln of non-positive value");
      return std::log(x);
    case Func::Sqrt:
      if (x <= 0.0) throw DomainError("sqrt of non-positive value");
      return std::sqrt(x);
    case Func::Abs: return std::abs(x);
    case Func::Tanh: return std::tanh(x);
  }
  throw DomainError("unknown function");
}

double pow_int_number(double a, long n) {
  if (n < 0) {
    if (a == 0.0) throw DomainError("negative power of zero");
    return 1.0 / pow_int_number(a, -n);
  }
  double result = 1.0;
  double base = a;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

struct NumberOps {
  using Scalar = double;
  std::span<const double> point;
  double lift(double v) const { return v; }
  double coord(int i) const { return point[i]; }
  static double value(double v) { return v; }
  static double func(Func f, double x) { return apply_number(f, x); }
  static double ipow(double a, long n) { return pow_int_number(a, n); }
  static double exp_of(double x) { return std::exp(x); }
  static double ln_of(double x) { return std::log(x); }
};

struct JetOps {
  using Scalar = Jet2;
  std::span<const double> point;
  int dim;
  Jet2 lift(double v) const { return Jet2::constant(v, dim); }
  Jet2 coord(int i) const { return Jet2::seed(i, point[i], dim); }
  static double value(const Jet2& v) { return v.value(); }
  static Jet2 func(Func f, const Jet2& x) { return apply(f, x); }
  static Jet2 ipow(const Jet2& a, long n) { return pow_int(a, n); }
  static Jet2 exp_of(const Jet2& x) { return apply(Func::Exp, x); }
  static Jet2 ln_of(const Jet2& x) { return apply(Func::Ln, x); }
};

template <class Ops>
class Evaluator {
 public:
  using S = typename Ops::Scalar;
  Evaluator(Ops ops, const ConstantBindings& bindings) : ops_(ops), bindings_(bindings) {}

  S eval(const Node& n) const {
    return std::visit([this](const auto& node) { return this->visit(node); }, n.v);
  }

 private:
  S visit(const Number& n) const { return ops_.lift(n.value); }
  S visit(const CoordRef& c) const { return ops_.coord(c.index); }
  S visit(const ConstRef& c) const { return ops_.lift(bindings_.at(c.name)); }
  S visit(const Negate& n) const { return -eval(*n.operand); }
  S visit(const Call& c) const { return Ops::func(c.func, eval(*c.arg)); }
  S visit(const Binary& b) const {
    S lhs = eval(*b.lhs);
    S rhs = eval(*b.rhs);
    switch (b.op) {
      case BinaryOp::Add: return lhs + rhs;
      case BinaryOp::Sub: return lhs - rhs;
      case BinaryOp::Mul: return lhs * rhs;
      case BinaryOp::Div:
        if (Ops::value(rhs) == 0.0) throw DomainError("division by zero");
        return lhs / rhs;
    }
    throw DomainError("unknown operator");
  }
  S visit(const Power& p) const {
    S base = eval(*p.base);
    long n = 0;
    if (integer_exponent(*p.exponent, n)) return Ops::ipow(base, n);
    if (Ops::value(base) <= 0.0) throw DomainError("non-integer power of non-positive base");
    S exponent = eval(*p.exponent);
    return Ops::exp_of(exponent * Ops::ln_of(base));
  }

  Ops ops_;
  const ConstantBindings& bindings_;
};

// Printing precedence levels: sum 1, product 2, unary minus 3, power 4, atom 5.
int level(const Node& n) {
  if (const auto* num = std::get_if<Number>(&n.v)) return num->value < 0 ? 3 : 5;
  if (std::holds_alternative<CoordRef>(n.v) || std::holds_alternative<ConstRef>(n.v) ||
      std::holds_alternative<Call>(n.v))
    return 5;
  if (std::holds_alternative<Negate>(n.v)) return 3;
  if (std::holds_alternative<Power>(n.v)) return 4;
  const auto& b = std::get<Binary>(n.v);
  return (b.op == BinaryOp::Add || b.op == BinaryOp::Sub) ? 1 : 2;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  // Shortest representation that round-trips.
  for (int prec = 1; prec < 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    double back = 0.0;
    std::from_chars(buf, buf + std::char_traits<char>::length(buf), back);
    if (back == v) {
      s = buf;
      break;
    }
  }
  return s;
}

class Printer {
 public:
  explicit Printer(const std::vector<std::string>& coords) : coords_(coords) {}

  std::string print(const Node& n) const {
    return std::visit([this](const auto& node) { return this->visit(node); }, n.v);
  }

 private:
  std::string wrap(const Node& n, bool parens) const {
    return parens ? "(" + print(n) + ")" : print(n);
  }

  std::string visit(const Number& n) const {
    if (n.value < 0) return "-" + format_number(-n.value);
    return format_number(n.value);
  }
  std::string visit(const CoordRef& c) const { return coords_.at(static_cast<std::size_t>(c.index)); }
  std::string visit(const ConstRef& c) const { return c.name; }
  std::string visit(const Negate& n) const { return "-" + wrap(*n.operand, level(*n.operand) < 3); }
  std::string visit(const Call& c) const { return std::string(func_name(c.func)) + "(" + print(*c.arg) + ")"; }
  std::string visit(const Power& p) const {
    return wrap(*p.base, level(*p.base) < 5) + "^" + wrap(*p.exponent, level(*p.exponent) < 3);
  }
  std::string visit(const Binary& b) const {
    const bool sum = b.op == BinaryOp::Add || b.op == BinaryOp::Sub;
    const char* op = b.op == BinaryOp::Add ? " + " : b.op == BinaryOp::Sub ? " - " : b.op == BinaryOp::Mul ? "*" : "/";
    if (sum) return print(*b.lhs) + op + wrap(*b.rhs, level(*b.rhs) < 2);
    return wrap(*b.lhs, level(*b.lhs) < 2) + op + wrap(*b.rhs, level(*b.rhs) < 3);
  }

  const std::vector<std::string>& coords_;
};

void collect_constants(const Node& n, std::set<std::string>& out) {
  std::visit(
      [&out](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, ConstRef>) {
          out.insert(node.name);
        } else if constexpr (std::is_same_v<T, Negate>) {
          collect_constants(*node.operand, out);
        } else if constexpr (std::is_same_v<T, Binary>) {
          collect_constants(*node.lhs, out);
          collect_constants(*node.rhs, out);
        } else if constexpr (std::is_same_v<T, Power>) {
          collect_constants(*node.base, out);
          collect_constants(*node.exponent, out);
        } else if constexpr (std::is_same_v<T, Call>) {
          collect_constants(*node.arg, out);
        }
      },
      n.v);
}

void check_coords(const Node& n, int dim) {
  std::visit(
      [dim](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, CoordRef>) {
          if (node.index < 0 || node.index >= dim) throw IndexOutOfRange("coordinate reference out of range");
        } else if constexpr (std::is_same_v<T, Negate>) {
          check_coords(*node.operand, dim);
        } else if constexpr (std::is_same_v<T, Binary>) {
          check_coords(*node.lhs, dim);
          check_coords(*node.rhs, dim);
        } else if constexpr (std::is_same_v<T, Power>) {
          check_coords(*node.base, dim);
          check_coords(*node.exponent, dim);
        } else if constexpr (std::is_same_v<T, Call>) {
          check_coords(*node.arg, dim);
        }
      },
      n.v);
}

}  // namespace

Expression::Expression(ast::NodePtr root, std::vector<std::string> coords)
    : root_(std::move(root)), coords_(std::make_shared<const std::vector<std::string>>(std::move(coords))) {
  check_coords(*root_, dim());
}

Expression Expression::parse(std::string_view source, std::span<const std::string> coords,
                             std::span<const std::string> constants) {
  Parser p(source, coords, constants);
  return Expression(p.parse(), std::vector<std::string>(coords.begin(), coords.end()));
}

Expression Expression::constant_value(double value, std::vector<std::string> coords) {
  return Expression(ast::number(value), std::move(coords));
}

double Expression::eval(std::span<const double> point, const ConstantBindings& bindings) const {
  if (static_cast<int>(point.size()) != dim()) throw DimensionMismatch("point dimension does not match chart");
  Evaluator<NumberOps> ev(NumberOps{point}, bindings);
  return ev.eval(*root_);
}

Jet2 Expression::eval_jet(std::span<const double> point, const ConstantBindings& bindings) const {
  if (static_cast<int>(point.size()) != dim()) throw DimensionMismatch("point dimension does not match chart");
  Evaluator<JetOps> ev(JetOps{point, dim()}, bindings);
  return ev.eval(*root_);
}

std::string Expression::to_string() const { return Printer(*coords_).print(*root_); }

std::vector<std::string> Expression::constants_used() const {
  std::set<std::string> names;
  collect_constants(*root_, names);
  return {names.begin(), names.end()};
}

Expression operator*(const Expression& a, const Expression& b) {
  return Expression(ast::binary(ast::BinaryOp::Mul, a.root_ptr(), b.root_ptr()), a.coordinates());
}

}  // namespace accr
