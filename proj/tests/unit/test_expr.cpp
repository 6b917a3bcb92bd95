#include <doctest.h>

#include <cmath>
#include <random>

#include "nic/core.hpp"
#include "nic/errors.hpp"
#include "nic/expr.hpp"

using nic::Point;
using nic::expr::Expr;

TEST_CASE("problem expressions evaluate to hand-computed values") {
  CHECK(Expr::parse("-sin(x1) - x2", 2).eval(Point{-1, -1}) ==
        doctest::Approx(std::sin(1.0) + 1.0));
  CHECK(Expr::parse("-sin(x1) - x2", 2).eval(Point{-1, -1}) == doctest::Approx(1.84147).epsilon(1e-5));
  CHECK(Expr::parse("cos(6*x1)/2 - x2 + 1.8", 2).eval(Point{1, 0}) ==
        doctest::Approx(std::cos(6.0) / 2 + 1.8));
  CHECK(Expr::parse("cos(6*x1)/2 - x2 + 1.8", 2).eval(Point{1, 0}) == doctest::Approx(2.2801).epsilon(1e-4));
  CHECK(Expr::parse("x1 + 4*x2", 2).eval(Point{1, 0}) == 1.0);
  CHECK(Expr::parse("0", 1).eval(Point{3.5}) == 0.0);
  CHECK(Expr::parse("-2*sin(4*x1)/sqrt(x1) + x2 - 2", 2).eval(Point{4, 1}) ==
        doctest::Approx(-2 * std::sin(16.0) / 2.0 + 1 - 2));
}

TEST_CASE("precedence and associativity") {
  const Point x{2.0, 3.0};
  CHECK(Expr::parse("1 + 2 * 3", 2).eval(x) == 7.0);
  CHECK(Expr::parse("8 / 4 / 2", 2).eval(x) == 1.0);
  CHECK(Expr::parse("8 - 4 - 2", 2).eval(x) == 2.0);
  CHECK(Expr::parse("-x1^2", 2).eval(x) == -4.0);
  CHECK(Expr::parse("x1^-1", 2).eval(x) == 0.5);
  CHECK(Expr::parse("x1^(-2)", 2).eval(x) == 0.25);
  CHECK(Expr::parse("2^3^2", 2).eval(x) == 64.0);
  CHECK(Expr::parse("(x1 + x2) * 2", 2).eval(x) == 10.0);
  CHECK(Expr::parse("  x1*x2 ", 2).eval(x) == 6.0);
  CHECK(Expr::parse("min(x1, x2, 1) + max(x1, -x2)", 2).eval(x) == 3.0);
  CHECK(Expr::parse("pi", 1).eval(Point{0}) == doctest::Approx(M_PI));
  CHECK(Expr::parse("1e-3 * 2.5E2", 1).eval(Point{0}) == doctest::Approx(0.25));
  CHECK(Expr::parse("-x1^3/3", 1).eval(Point{-1}) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(Expr::parse("", 1), nic::ParseError);
  CHECK_THROWS_AS(Expr::parse("x3", 2), nic::ParseError);
  CHECK_THROWS_AS(Expr::parse("x0", 2), nic::ParseError);
  CHECK_THROWS_AS(Expr::parse("x1^x2", 2), nic::ParseError);
  CHECK_THROWS_AS(Expr::parse("sin(x1", 1), nic::ParseError);
  CHECK_THROWS_AS(Expr::parse("foo(x1)", 1), nic::ParseError);
  CHECK_THROWS_AS(Expr::parse("min(x1)", 1), nic::ParseError);
  CHECK_THROWS_AS(Expr::parse("sin(x1, x1)", 1), nic::ParseError);
  CHECK_THROWS_AS(Expr::parse("1 +", 1), nic::ParseError);
  CHECK_THROWS_AS(Expr::parse("1 2", 1), nic::ParseError);
  try {
    Expr::parse("x1 + $", 1);
    FAIL("expected ParseError");
  } catch (const nic::ParseError& e) {
    CHECK(e.position() == 5);
  }
}

TEST_CASE("domain violations are errors, not NaN") {
  CHECK_THROWS_AS(Expr::parse("sqrt(x1)", 1).eval(Point{-1}), nic::EvalError);
  CHECK_THROWS_AS(Expr::parse("log(x1)", 1).eval(Point{0}), nic::EvalError);
  CHECK_THROWS_AS(Expr::parse("1/x1", 1).eval(Point{0}), nic::EvalError);
  CHECK_THROWS_AS(Expr::parse("x1^0.5", 1).eval(Point{-4}), nic::EvalError);
  CHECK_THROWS_AS(Expr::parse("x1^-1", 1).eval(Point{0}), nic::EvalError);
  CHECK_THROWS_AS(Expr::parse("x1", 1).eval(Point{1, 2}), nic::UsageError);
  try {
    Expr::parse("x1 + sqrt(x1 - 2)", 1).eval(Point{1});
    FAIL("expected EvalError");
  } catch (const nic::EvalError& e) {
    CHECK(e.subexpression().find("sqrt") != std::string::npos);
  }
}

TEST_CASE("nonsmooth detection and used variables") {
  CHECK(Expr::parse("abs(x1 - x2) + x1", 2).has_nonsmooth());
  CHECK(Expr::parse("max(x1, 0)", 2).has_nonsmooth());
  CHECK_FALSE(Expr::parse("-sin(x1) - x2", 2).has_nonsmooth());
  CHECK(Expr::parse("cos(6*x1)/2 + 1.8", 3).used_variables() == std::vector<bool>{true, false, false});
}

TEST_CASE("printing round-trips on random points") {
  const char* texts[] = {"-sin(x1) - x2",
                         "abs(x1 - x2) + x1",
                         "cos(6*x1)/2 - x2 + 1.8",
                         "-2*sin(4*x1)/sqrt(x1 + 2) + x2 - 2",
                         "x1^3/3 - 2^-1*x2 + exp(-x1*x2)",
                         "min(x1, x2, 0.3) - max(-x1, tan(x2/2))",
                         "-(-x1)^2 + 0.1 - -x2"};
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const char* t : texts) {
    const Expr e = Expr::parse(t, 2);
    const Expr back = Expr::parse(e.to_string(), 2);
    for (int i = 0; i < 100; ++i) {
      const Point x{u(rng), u(rng)};
      CHECK(back.eval(x) == e.eval(x));
    }
  }
}

TEST_CASE("finite-difference Jacobian") {
  std::vector<Expr> r{Expr::parse("-sin(x1) - x2", 2)};
  auto j = nic::expr::finite_diff_jacobian(r, Point{0, 0});
  CHECK(j.rows == 1);
  CHECK(j.cols == 2);
  CHECK(j(0, 0) == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(j(0, 1) == doctest::Approx(-1.0).epsilon(1e-8));

  std::vector<Expr> lin{Expr::parse("x1", 2)};
  auto jl = nic::expr::finite_diff_jacobian(lin, Point{0.3, -7});
  CHECK(jl(0, 0) == doctest::Approx(1.0));
  CHECK(jl(0, 1) == 0.0);

  std::vector<Expr> sq{Expr::parse("x1^2", 1)};
  CHECK(std::abs(nic::expr::finite_diff_jacobian(sq, Point{3})(0, 0) - 6.0) < 1e-6);
}

TEST_CASE("finite differences match analytic derivatives") {
  struct Case {
    const char* text;
    double (*d1)(double, double);
    double (*d2)(double, double);
  };
  const Case cases[] = {
      {"x1^3 - 2*x1*x2 + x2^2", [](double a, double b) { return 3 * a * a - 2 * b; },
       [](double a, double b) { return -2 * a + 2 * b; }},
      {"sin(3*x1)*cos(x2)", [](double a, double b) { return 3 * std::cos(3 * a) * std::cos(b); },
       [](double a, double b) { return -std::sin(3 * a) * std::sin(b); }},
      {"cos(6*x1)/2 - x2 + 1.8", [](double a, double) { return -3 * std::sin(6 * a); },
       [](double, double) { return -1.0; }},
      {"exp(x1*x2)", [](double a, double b) { return b * std::exp(a * b); },
       [](double a, double b) { return a * std::exp(a * b); }},
  };
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const auto& c : cases) {
    std::vector<Expr> e{Expr::parse(c.text, 2)};
    for (int i = 0; i < 50; ++i) {
      const double a = u(rng), b = u(rng);
      auto j = nic::expr::finite_diff_jacobian(e, Point{a, b});
      const double g1 = c.d1(a, b), g2 = c.d2(a, b);
      CHECK(std::abs(j(0, 0) - g1) <= 1e-5 * std::max(1.0, std::abs(g1)));
      CHECK(std::abs(j(0, 1) - g2) <= 1e-5 * std::max(1.0, std::abs(g2)));
    }
  }
}
