#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nic::expr {

/// Immutable arithmetic expression over variables x1..xn.
///
/// Grammar (whitespace insignificant):
///
///     sum     := product (('+' | '-') product)*
///     product := unary (('*' | '/') unary)*
///     unary   := '-' unary | power
///     power   := atom ('^' literal)*
///     atom    := number | 'pi' | 'x'<index> | func '(' args ')' | '(' sum ')'
///     literal := ['-'] number | '(' ['-'] number ')'
///
/// with func one of sin cos tan sqrt abs exp log (one argument) and min max
/// (two or more). Copies share the tree and are safe to evaluate concurrently.
class Expr {
 public:
  struct Node;

  /// Throws ParseError on malformed text, unknown names, variables beyond
  /// `dimension` or non-constant exponents.
  static Expr parse(std::string_view text, std::size_t dimension);

  /// Throws UsageError if x has the wrong length and EvalError on domain
  /// violations (sqrt of a negative, log of a non-positive, division by zero).
  [[nodiscard]] double eval(std::span<const double> x) const;

  /// Fully parenthesized text that parses back to an equivalent expression.
  [[nodiscard]] std::string to_string() const;

  [[nodiscard]] std::size_t dimension() const noexcept { return dimension_; }

  /// True if abs, min or max occurs anywhere (kinks in the derivative).
  [[nodiscard]] bool has_nonsmooth() const;

  /// used[j] is true iff x_{j+1} occurs in the expression.
  [[nodiscard]] std::vector<bool> used_variables() const;

  double operator()(std::span<const double> x) const { return eval(x); }

 private:
  Expr(std::shared_ptr<const Node> root, std::size_t dimension)
      : root_(std::move(root)), dimension_(dimension) {}

  std::shared_ptr<const Node> root_;
  std::size_t dimension_ = 0;
};

inline Expr parse(std::string_view text, std::size_t dimension) {
  return Expr::parse(text, dimension);
}

inline double eval(const Expr& e, std::span<const double> x) { return e.eval(x); }

/// Dense row-major m x n matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

/// Central differences (f(x + h e_j) - f(x - h e_j)) / 2h for every component.
Matrix finite_diff_jacobian(std::span<const Expr> exprs, std::span<const double> x,
                            double h = 1e-6);

}  // namespace nic::expr
