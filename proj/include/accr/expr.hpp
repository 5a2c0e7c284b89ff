#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "accr/jets.hpp"

namespace accr {

// Late-bound values for the named constants appearing in expressions.
class ConstantBindings {
 public:
  ConstantBindings() = default;
  ConstantBindings(std::initializer_list<std::pair<const std::string, double>> init);

  // Throws accr::Error on a duplicate name or a non-finite value.
  void bind(const std::string& name, double value);
  // Like bind, but replaces an existing value.
  void set(const std::string& name, double value);

  bool contains(const std::string& name) const { return values_.count(name) != 0; }
  double at(const std::string& name) const;
  const std::map<std::string, double>& values() const { return values_; }

 private:
  std::map<std::string, double> values_;
};

namespace ast {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

enum class BinaryOp { Add, Sub, Mul, Div };

struct Number {
  double value;
};
struct CoordRef {
  int index;
};
struct ConstRef {
  std::string name;
};
struct Negate {
  NodePtr operand;
};
struct Binary {
  BinaryOp op;
  NodePtr lhs;
  NodePtr rhs;
};
struct Power {
  NodePtr base;
  NodePtr exponent;
};
struct Call {
  Func func;
  NodePtr arg;
};

struct Node {
  std::variant<Number, CoordRef, ConstRef, Negate, Binary, Power, Call> v;
};

NodePtr number(double value);
NodePtr coord(int index);
NodePtr constant(std::string name);
NodePtr neg(NodePtr operand);
NodePtr binary(BinaryOp op, NodePtr lhs, NodePtr rhs);
NodePtr power(NodePtr base, NodePtr exponent);
NodePtr call(Func func, NodePtr arg);

}  // namespace ast

// Scalar arithmetic expression over the coordinates of a chart and a set of
// named constants. Immutable; evaluation is pure.
class Expression {
 public:
  Expression() = default;
  Expression(ast::NodePtr root, std::vector<std::string> coords);

  // Grammar (precedence ^ > unary - > * / > + -, ^ right-associative):
  //   expr   := term (("+"|"-") term)* ;
  //   term   := factor (("*"|"/") factor)* ;
  //   factor := "-" factor | power ;
  //   power  := atom ("^" factor)? ;
  //   atom   := NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")" ;
  // Throws SyntaxError (with byte offset) or UnknownIdentifier.
  static Expression parse(std::string_view source, std::span<const std::string> coords,
                          std::span<const std::string> constants);

  static Expression constant_value(double value, std::vector<std::string> coords);

  const ast::Node& root() const { return *root_; }
  const ast::NodePtr& root_ptr() const { return root_; }
  int dim() const { return static_cast<int>(coords_->size()); }
  const std::vector<std::string>& coordinates() const { return *coords_; }

  // Throws DomainError, UnknownIdentifier (unbound constant) or DimensionMismatch.
  double eval(std::span<const double> point, const ConstantBindings& bindings) const;
  Jet2 eval_jet(std::span<const double> point, const ConstantBindings& bindings) const;

  std::string to_string() const;
  std::vector<std::string> constants_used() const;

 private:
  ast::NodePtr root_;
  std::shared_ptr<const std::vector<std::string>> coords_;
};

Expression operator*(const Expression& a, const Expression& b);

}  // namespace accr
