#pragma once

// A tiny arithmetic expression language shared by family laws, custom warp
// functions and user-supplied graphs:
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | primary
//   primary := number | variable | call | '(' expr ')'
//   call    := name '(' expr (',' expr)* ')'
//
// Functions: sin, cos, pow(a, b), and additionally exp, log, sqrt, sinh, cosh.
// Expressions evaluate over doubles or jets, so derivatives of user input are
// exact. Printing yields a canonical string that parses back to the same tree.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "assocfam/errors.hpp"
#include "assocfam/jet.hpp"

namespace assocfam {

class Expression {
 public:
  enum class Op { Number, Variable, Add, Sub, Mul, Div, Neg, Call };
  enum class Fn { Sin, Cos, Pow, Exp, Log, Sqrt, Sinh, Cosh };

  struct Node {
    Op op = Op::Number;
    double number = 0.0;
    int variable = -1;
    Fn fn = Fn::Sin;
    std::vector<int> children;
    friend bool operator==(const Node&, const Node&) = default;
  };

  Expression() = default;

  /// Parses `text` with the given variable names (in evaluation order).
  /// The alias "θ" is accepted for a variable named "theta".
  static Expression parse(std::string_view text, std::vector<std::string> variables);

  static Expression constant(double c, std::vector<std::string> variables = {});

  std::string str() const;
  const std::vector<std::string>& variables() const { return variables_; }
  bool is_constant() const { return !depends_on_variables(root_); }

  template <class S>
  S eval(std::span<const S> args) const {
    if (args.size() != variables_.size())
      throw ContractViolation("expression evaluated with wrong argument count");
    return eval_node(root_, args);
  }

  /// Convenience for single-variable expressions.
  template <class S>
  S operator()(const S& x) const {
    return eval(std::span<const S>(&x, 1));
  }

  friend bool operator==(const Expression& a, const Expression& b) {
    if (a.root_ < 0 || b.root_ < 0) return a.variables_ == b.variables_ && a.root_ == b.root_;
    return a.variables_ == b.variables_ && a.canonical_equal(a.root_, b, b.root_);
  }

 private:
  friend class ExpressionParser;

  bool depends_on_variables(int node) const;
  bool canonical_equal(int a, const Expression& other, int b) const;
  void print(int node, std::string& out) const;
  double eval_constant(int node) const;

  static double like(double, double c) { return c; }
  template <int N>
  static Jet<N> like(const Jet<N>& x, double c) {
    return Jet<N>(c, x.degree());
  }

  template <class S>
  static S integer_power(const S& base, long n) {
    if (n < 0) {
      return integer_power(lift(ElementaryFunction::Recip, base), -n);
    }
    S result = like(base, 1.0);
    S b = base;
    while (n > 0) {
      if (n & 1) result = result * b;
      n >>= 1;
      if (n > 0) b = b * b;
    }
    return result;
  }

  template <class S>
  S eval_node(int index, std::span<const S> args) const {
    const Node& n = nodes_[static_cast<std::size_t>(index)];
    switch (n.op) {
      case Op::Number:
        return like(args.empty() ? S{} : args[0], n.number);
      case Op::Variable:
        return args[static_cast<std::size_t>(n.variable)];
      case Op::Add:
        return eval_node(n.children[0], args) + eval_node(n.children[1], args);
      case Op::Sub:
        return eval_node(n.children[0], args) - eval_node(n.children[1], args);
      case Op::Mul:
        return eval_node(n.children[0], args) * eval_node(n.children[1], args);
      case Op::Div: {
        const S den = eval_node(n.children[1], args);
        return eval_node(n.children[0], args) * lift(ElementaryFunction::Recip, den);
      }
      case Op::Neg:
        return -eval_node(n.children[0], args);
      case Op::Call:
        break;
    }
    const S a = eval_node(n.children[0], args);
    switch (n.fn) {
      case Fn::Sin: return lift(ElementaryFunction::Sin, a);
      case Fn::Cos: return lift(ElementaryFunction::Cos, a);
      case Fn::Exp: return lift(ElementaryFunction::Exp, a);
      case Fn::Log: return lift(ElementaryFunction::Log, a);
      case Fn::Sqrt: return lift(ElementaryFunction::Sqrt, a);
      case Fn::Sinh: return lift(ElementaryFunction::Sinh, a);
      case Fn::Cosh: return lift(ElementaryFunction::Cosh, a);
      case Fn::Pow: break;
    }
    const int ex = n.children[1];
    if (!depends_on_variables(ex)) {
      const double p = eval_constant(ex);
      if (std::floor(p) == p && std::fabs(p) <= 64.0) return integer_power(a, static_cast<long>(p));
      return lift(ElementaryFunction::Pow, a, p);
    }
    const S b = eval_node(ex, args);
    return lift(ElementaryFunction::Exp, b * lift(ElementaryFunction::Log, a));
  }

  std::vector<Node> nodes_;
  int root_ = -1;
  std::vector<std::string> variables_;
};

/// Shortest decimal string that parses back to exactly `x`.
std::string format_shortest(double x);

/// Strict parse of a full decimal number; throws ParseError.
double parse_number(std::string_view text);

}  // namespace assocfam
