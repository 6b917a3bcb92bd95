#include "nic/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

#include "nic/errors.hpp"

namespace nic::expr {

enum class Op { Number, Variable, Neg, Add, Sub, Mul, Div, Pow, Call };
enum class Func { Sin, Cos, Tan, Sqrt, Abs, Exp, Log, Min, Max };

struct Expr::Node {
  Op op = Op::Number;
  double value = 0.0;       // Number literal, or exponent for Pow
  std::size_t index = 0;    // Variable (0-based)
  Func func = Func::Sin;    // Call
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

struct FuncInfo {
  std::string_view name;
  Func func;
  bool variadic;
};

constexpr FuncInfo kFunctions[] = {
    {"sin", Func::Sin, false},   {"cos", Func::Cos, false}, {"tan", Func::Tan, false},
    {"sqrt", Func::Sqrt, false}, {"abs", Func::Abs, false}, {"exp", Func::Exp, false},
    {"log", Func::Log, false},   {"min", Func::Min, true},  {"max", Func::Max, true},
};

std::string_view func_name(Func f) {
  for (const auto& info : kFunctions)
    if (info.func == f) return info.name;
  return "?";
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

NodePtr make_number(double v) {
  auto n = std::make_shared<Expr::Node>();
  n->op = Op::Number;
  n->value = v;
  return n;
}

NodePtr make_binary(Op op, NodePtr lhs, NodePtr rhs) {
  auto n = std::make_shared<Expr::Node>();
  n->op = op;
  n->args = {std::move(lhs), std::move(rhs)};
  return n;
}

class Parser {
 public:
  Parser(std::string_view text, std::size_t dimension) : text_(text), dimension_(dimension) {}

  NodePtr parse() {
    skip_ws();
    if (pos_ == text_.size()) throw ParseError("empty expression", pos_);
    NodePtr root = parse_sum();
    skip_ws();
    if (pos_ != text_.size())
      throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return root;
  }

 private:
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

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size())
        throw ParseError(std::string("expected '") + c + "' but reached end of input", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  NodePtr parse_sum() {
    NodePtr lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(Op::Add, lhs, parse_product());
      } else if (accept('-')) {
        lhs = make_binary(Op::Sub, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_product() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(Op::Mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = make_binary(Op::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) {
      auto n = std::make_shared<Expr::Node>();
      n->op = Op::Neg;
      n->args = {parse_unary()};
      return n;
    }
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    while (accept('^')) {
      auto n = std::make_shared<Expr::Node>();
      n->op = Op::Pow;
      n->value = parse_exponent();
      n->args = {std::move(base)};
      base = n;
    }
    return base;
  }

  double parse_exponent() {
    skip_ws();
    const std::size_t start = pos_;
    const bool paren = accept('(');
    const bool negative = accept('-');
    skip_ws();
    if (pos_ >= text_.size() || !(std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
      throw ParseError("exponent must be a numeric literal", start);
    double v = parse_number_literal();
    if (paren) expect(')');
    return negative ? -v : v;
  }

  double parse_number_literal() {
    const char* begin = text_.data() + pos_;
    // strtod needs a terminated buffer; copy the candidate span
    std::size_t end = pos_;
    while (end < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '.' ||
            text_[end] == 'e' || text_[end] == 'E' ||
            ((text_[end] == '+' || text_[end] == '-') && end > pos_ &&
             (text_[end - 1] == 'e' || text_[end - 1] == 'E'))))
      ++end;
    std::string buf(begin, end - pos_);
    char* stop = nullptr;
    const double v = std::strtod(buf.c_str(), &stop);
    const std::size_t used = static_cast<std::size_t>(stop - buf.c_str());
    if (used == 0) throw ParseError("malformed number", pos_);
    pos_ += used;
    return v;
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_sum();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return make_number(parse_number_literal());
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string_view name = text_.substr(start, pos_ - start);
      if (name == "pi") return make_number(std::numbers::pi);
      if (name.size() > 1 && name[0] == 'x' &&
          name.find_first_not_of("0123456789", 1) == std::string_view::npos) {
        const std::size_t index = std::stoul(std::string(name.substr(1)));
        if (index == 0 || index > dimension_)
          throw ParseError("variable '" + std::string(name) + "' outside dimension " +
                               std::to_string(dimension_),
                           start);
        auto n = std::make_shared<Expr::Node>();
        n->op = Op::Variable;
        n->index = index - 1;
        return n;
      }
      for (const auto& info : kFunctions) {
        if (info.name != name) continue;
        auto n = std::make_shared<Expr::Node>();
        n->op = Op::Call;
        n->func = info.func;
        expect('(');
        n->args.push_back(parse_sum());
        while (accept(',')) n->args.push_back(parse_sum());
        expect(')');
        if (!info.variadic && n->args.size() != 1)
          throw ParseError(std::string(name) + " takes exactly one argument", start);
        if (info.variadic && n->args.size() < 2)
          throw ParseError(std::string(name) + " takes at least two arguments", start);
        return n;
      }
      throw ParseError("unknown identifier '" + std::string(name) + "'", start);
    }
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  std::string_view text_;
  std::size_t dimension_;
  std::size_t pos_ = 0;
};

std::string render(const Expr::Node& n) {
  switch (n.op) {
    case Op::Number: return format_number(n.value);
    case Op::Variable: return "x" + std::to_string(n.index + 1);
    case Op::Neg: return "(-" + render(*n.args[0]) + ")";
    case Op::Add: return "(" + render(*n.args[0]) + " + " + render(*n.args[1]) + ")";
    case Op::Sub: return "(" + render(*n.args[0]) + " - " + render(*n.args[1]) + ")";
    case Op::Mul: return "(" + render(*n.args[0]) + " * " + render(*n.args[1]) + ")";
    case Op::Div: return "(" + render(*n.args[0]) + " / " + render(*n.args[1]) + ")";
    case Op::Pow: return "(" + render(*n.args[0]) + "^(" + format_number(n.value) + "))";
    case Op::Call: {
      std::string s(func_name(n.func));
      s += "(";
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) s += ", ";
        s += render(*n.args[i]);
      }
      return s + ")";
    }
  }
  return "?";
}

double evaluate(const Expr::Node& n, std::span<const double> x) {
  switch (n.op) {
    case Op::Number: return n.value;
    case Op::Variable: return x[n.index];
    case Op::Neg: return -evaluate(*n.args[0], x);
    case Op::Add: return evaluate(*n.args[0], x) + evaluate(*n.args[1], x);
    case Op::Sub: return evaluate(*n.args[0], x) - evaluate(*n.args[1], x);
    case Op::Mul: return evaluate(*n.args[0], x) * evaluate(*n.args[1], x);
    case Op::Div: {
      const double den = evaluate(*n.args[1], x);
      if (den == 0.0) throw EvalError("division by zero", render(n));
      return evaluate(*n.args[0], x) / den;
    }
    case Op::Pow: {
      const double base = evaluate(*n.args[0], x);
      const double p = n.value;
      if (base < 0.0 && p != std::floor(p))
        throw EvalError("negative base with non-integer exponent", render(n));
      if (base == 0.0 && p < 0.0) throw EvalError("zero raised to a negative power", render(n));
      return std::pow(base, p);
    }
    case Op::Call: {
      const double a = evaluate(*n.args[0], x);
      switch (n.func) {
        case Func::Sin: return std::sin(a);
        case Func::Cos: return std::cos(a);
        case Func::Tan: return std::tan(a);
        case Func::Sqrt:
          if (a < 0.0) throw EvalError("square root of a negative number", render(n));
          return std::sqrt(a);
        case Func::Abs: return std::abs(a);
        case Func::Exp: return std::exp(a);
        case Func::Log:
          if (a <= 0.0) throw EvalError("logarithm of a non-positive number", render(n));
          return std::log(a);
        case Func::Min: {
          double m = a;
          for (std::size_t i = 1; i < n.args.size(); ++i) m = std::min(m, evaluate(*n.args[i], x));
          return m;
        }
        case Func::Max: {
          double m = a;
          for (std::size_t i = 1; i < n.args.size(); ++i) m = std::max(m, evaluate(*n.args[i], x));
          return m;
        }
      }
    }
  }
  return 0.0;
}

bool any_nonsmooth(const Expr::Node& n) {
  if (n.op == Op::Call &&
      (n.func == Func::Abs || n.func == Func::Min || n.func == Func::Max))
    return true;
  for (const auto& a : n.args)
    if (any_nonsmooth(*a)) return true;
  return false;
}

void collect_variables(const Expr::Node& n, std::vector<bool>& used) {
  if (n.op == Op::Variable) used[n.index] = true;
  for (const auto& a : n.args) collect_variables(*a, used);
}

}  // namespace

Expr Expr::parse(std::string_view text, std::size_t dimension) {
  if (dimension == 0) throw UsageError("expression dimension must be positive");
  Parser p(text, dimension);
  return Expr(p.parse(), dimension);
}

double Expr::eval(std::span<const double> x) const {
  if (x.size() != dimension_)
    throw UsageError("expression expects " + std::to_string(dimension_) + " variables, got " +
                     std::to_string(x.size()));
  return evaluate(*root_, x);
}

std::string Expr::to_string() const { return render(*root_); }

bool Expr::has_nonsmooth() const { return any_nonsmooth(*root_); }

std::vector<bool> Expr::used_variables() const {
  std::vector<bool> used(dimension_, false);
  collect_variables(*root_, used);
  return used;
}

Matrix finite_diff_jacobian(std::span<const Expr> exprs, std::span<const double> x, double h) {
  if (!(h > 0.0)) throw UsageError("finite-difference step must be positive");
  Matrix jac(exprs.size(), x.size());
  std::vector<double> probe(x.begin(), x.end());
  for (std::size_t j = 0; j < x.size(); ++j) {
    for (std::size_t q = 0; q < exprs.size(); ++q) {
      probe[j] = x[j] + h;
      const double up = exprs[q].eval(probe);
      probe[j] = x[j] - h;
      const double down = exprs[q].eval(probe);
      jac(q, j) = (up - down) / (2.0 * h);
    }
    probe[j] = x[j];
  }
  return jac;
}

}  // namespace nic::expr
