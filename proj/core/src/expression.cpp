#include "assocfam/expression.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>

namespace assocfam {

std::string format_shortest(double x) {
  if (x == 0.0) return std::signbit(x) ? "-0" : "0";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

double parse_number(std::string_view text) {
  double x = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, x);
  if (res.ec != std::errc() || res.ptr != last || first == last)
    throw ParseError("not a number: '" + std::string(text) + "'");
  return x;
}

namespace {

struct FnName {
  std::string_view name;
  Expression::Fn fn;
  int arity;
};

constexpr std::array<FnName, 8> kFunctions{{
    {"sin", Expression::Fn::Sin, 1},
    {"cos", Expression::Fn::Cos, 1},
    {"pow", Expression::Fn::Pow, 2},
    {"exp", Expression::Fn::Exp, 1},
    {"log", Expression::Fn::Log, 1},
    {"sqrt", Expression::Fn::Sqrt, 1},
    {"sinh", Expression::Fn::Sinh, 1},
    {"cosh", Expression::Fn::Cosh, 1},
}};

std::string_view fn_name(Expression::Fn fn) {
  for (const auto& f : kFunctions)
    if (f.fn == fn) return f.name;
  return "?";
}

int precedence(Expression::Op op) {
  switch (op) {
    case Expression::Op::Add:
    case Expression::Op::Sub:
      return 1;
    case Expression::Op::Mul:
    case Expression::Op::Div:
      return 2;
    case Expression::Op::Neg:
      return 3;
    default:
      return 4;
  }
}

}  // namespace

class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, Expression& expr) : text_(text), expr_(expr) {}

  int parse() {
    const int root = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("expression '" + std::string(text_) + "': " + what + " at offset " +
                     std::to_string(pos_));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  int add(Expression::Node n) {
    expr_.nodes_.push_back(std::move(n));
    return static_cast<int>(expr_.nodes_.size()) - 1;
  }

  int binary(Expression::Op op, int a, int b) {
    Expression::Node n;
    n.op = op;
    n.children = {a, b};
    return add(std::move(n));
  }

  int parse_expr() {
    int lhs = parse_term();
    while (true) {
      if (accept('+')) {
        lhs = binary(Expression::Op::Add, lhs, parse_term());
      } else if (accept('-')) {
        lhs = binary(Expression::Op::Sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  int parse_term() {
    int lhs = parse_unary();
    while (true) {
      if (accept('*')) {
        lhs = binary(Expression::Op::Mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = binary(Expression::Op::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  int parse_unary() {
    if (accept('-')) {
      Expression::Node n;
      n.op = Expression::Op::Neg;
      n.children = {parse_unary()};
      return add(std::move(n));
    }
    return parse_primary();
  }

  int parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (accept('(')) {
      const int inner = parse_expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number_node();
    std::string ident = parse_identifier();
    if (ident.empty()) fail("unexpected character");
    if (accept('(')) return parse_call(ident);
    for (std::size_t i = 0; i < expr_.variables_.size(); ++i) {
      const std::string& v = expr_.variables_[i];
      if (ident == v || (v == "theta" && ident == "\xCE\xB8")) {
        Expression::Node n;
        n.op = Expression::Op::Variable;
        n.variable = static_cast<int>(i);
        return add(std::move(n));
      }
    }
    fail("unknown identifier '" + ident + "'");
  }

  std::string parse_identifier() {
    const std::size_t start = pos_;
    // Greek theta in UTF-8.
    if (text_.substr(pos_, 2) == "\xCE\xB8") {
      pos_ += 2;
      return std::string(text_.substr(start, 2));
    }
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  int parse_number_node() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
      ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        pos_ = p;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    Expression::Node n;
    n.op = Expression::Op::Number;
    n.number = parse_number(text_.substr(start, pos_ - start));
    return add(std::move(n));
  }

  int parse_call(const std::string& name) {
    const FnName* fn = nullptr;
    for (const auto& f : kFunctions)
      if (f.name == name) fn = &f;
    if (fn == nullptr) fail("unknown function '" + name + "'");
    Expression::Node n;
    n.op = Expression::Op::Call;
    n.fn = fn->fn;
    n.children.push_back(parse_expr());
    while (accept(',')) n.children.push_back(parse_expr());
    if (!accept(')')) fail("expected ')' after arguments");
    if (static_cast<int>(n.children.size()) != fn->arity)
      fail("wrong number of arguments to '" + name + "'");
    return add(std::move(n));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Expression& expr_;
};

Expression Expression::parse(std::string_view text, std::vector<std::string> variables) {
  Expression e;
  e.variables_ = std::move(variables);
  ExpressionParser parser(text, e);
  e.root_ = parser.parse();
  return e;
}

Expression Expression::constant(double c, std::vector<std::string> variables) {
  Expression e;
  e.variables_ = std::move(variables);
  Node n;
  n.op = Op::Number;
  n.number = std::fabs(c);
  e.nodes_.push_back(n);
  e.root_ = 0;
  if (std::signbit(c)) {
    Node neg;
    neg.op = Op::Neg;
    neg.children = {0};
    e.nodes_.push_back(neg);
    e.root_ = 1;
  }
  return e;
}

bool Expression::depends_on_variables(int node) const {
  const Node& n = nodes_[static_cast<std::size_t>(node)];
  if (n.op == Op::Variable) return true;
  for (int c : n.children)
    if (depends_on_variables(c)) return true;
  return false;
}

double Expression::eval_constant(int node) const {
  const std::vector<double> none(variables_.size(), 0.0);
  return eval_node<double>(node, std::span<const double>(none));
}

bool Expression::canonical_equal(int a, const Expression& other, int b) const {
  const Node& x = nodes_[static_cast<std::size_t>(a)];
  const Node& y = other.nodes_[static_cast<std::size_t>(b)];
  if (x.op != y.op || x.children.size() != y.children.size()) return false;
  switch (x.op) {
    case Op::Number:
      if (x.number != y.number) return false;
      break;
    case Op::Variable:
      if (x.variable != y.variable) return false;
      break;
    case Op::Call:
      if (x.fn != y.fn) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < x.children.size(); ++i)
    if (!canonical_equal(x.children[i], other, y.children[i])) return false;
  return true;
}

std::string Expression::str() const {
  std::string out;
  if (root_ >= 0) print(root_, out);
  return out;
}

void Expression::print(int node, std::string& out) const {
  const Node& n = nodes_[static_cast<std::size_t>(node)];
  auto child = [&](int c, bool parens) {
    if (parens) out += '(';
    print(c, out);
    if (parens) out += ')';
  };
  const int p = precedence(n.op);
  switch (n.op) {
    case Op::Number:
      out += format_shortest(n.number);
      return;
    case Op::Variable:
      out += variables_[static_cast<std::size_t>(n.variable)];
      return;
    case Op::Neg: {
      out += '-';
      const int c = n.children[0];
      child(c, precedence(nodes_[static_cast<std::size_t>(c)].op) < p);
      return;
    }
    case Op::Call:
      out += fn_name(n.fn);
      out += '(';
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i > 0) out += ',';
        print(n.children[i], out);
      }
      out += ')';
      return;
    default:
      break;
  }
  const int l = n.children[0], r = n.children[1];
  child(l, precedence(nodes_[static_cast<std::size_t>(l)].op) < p);
  out += n.op == Op::Add ? '+' : n.op == Op::Sub ? '-' : n.op == Op::Mul ? '*' : '/';
  child(r, precedence(nodes_[static_cast<std::size_t>(r)].op) <= p);
}

}  // namespace assocfam
