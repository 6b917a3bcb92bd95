#include <doctest.h>

#include <cmath>
#include <random>

#include "nic/bounds.hpp"
#include "nic/errors.hpp"
#include "nic/expr.hpp"

using namespace nic;
using namespace nic::bounds;

namespace {

// Second code path: the closed forms written as expressions.
double formula(const char* text, std::initializer_list<double> args) {
  const Point x(args);
  return expr::Expr::parse(text, x.size()).eval(x);
}

}  // namespace

TEST_CASE("box packing bound") {
  CHECK(box_packing_bound(BoxDomain({0}, {1}), 1.0, 0.5).value == 3.0);
  CHECK(box_packing_bound(BoxDomain({-1, -1}, {1, 1}), 2.0, 1.0).value == 25.0);
  CHECK(box_packing_bound(BoxDomain({-1}, {1}), 2.0, 1.0).value == 5.0);
  CHECK(box_packing_bound(BoxDomain({0.3, 2}, {0.3, 2}), 1.0, 0.5).value == 1.0);
  CHECK(box_packing_bound(BoxDomain({0}, {1}), 1.0, 0.5).warnings.empty());
  CHECK_FALSE(box_packing_bound(BoxDomain({0}, {1}), 1.0, 2.0).warnings.empty());
  CHECK_THROWS_AS(box_packing_bound(BoxDomain({0}, {1}), 0.0, 0.5), UsageError);
  CHECK_THROWS_AS(box_packing_bound(BoxDomain({0}, {1}), 1.0, -0.5), UsageError);
}

TEST_CASE("box packing bound grows as delta shrinks") {
  const BoxDomain box({0, -2, 1}, {1, 3, 1.5});
  double prev = 0.0;
  for (double delta : {1.0, 0.5, 0.25, 0.125, 0.01}) {
    const double v = box_packing_bound(box, 3.0, delta).value;
    CHECK(v >= prev);
    CHECK(v >= 1.0);
    prev = v;
  }
}

TEST_CASE("lattice count") {
  CHECK(lattice_count(BoxDomain({0, 0}, {3, 2})).value == 12.0);
  auto none = lattice_count(BoxDomain({0.2}, {0.8}));
  CHECK(none.value == 0.0);
  CHECK_FALSE(none.warnings.empty());
  CHECK(lattice_count(BoxDomain({5}, {5})).value == 1.0);
  CHECK(lattice_count(BoxDomain({-1.5, 0.1}, {1.5, 2.9})).value == 6.0);
}

TEST_CASE("ball packing bound") {
  CHECK(ball_packing_bound(1, 1, 1, 2).value == 9.0);
  CHECK(ball_packing_bound(1, 1, 2, 1).value == 2.0);
  CHECK(ball_packing_bound(0, 1, 1, 3).value == 1.0);
  CHECK_THROWS_AS(ball_packing_bound(1, 1, 0, 1), UsageError);
  CHECK_THROWS_AS(ball_packing_bound(1, 1, 1, 0), UsageError);
}

TEST_CASE("complexity bounds") {
  CHECK(complexity_upper(1, 1, 1).value == 3.0);
  CHECK(complexity_upper(1, 0.1, 2).value == doctest::Approx(441.0));
  CHECK(complexity_upper(std::sqrt(2.0), 0.1, 2).value == doctest::Approx(857.5685).epsilon(1e-6));
  CHECK_THROWS_AS(complexity_upper(0, 0.1, 2), UsageError);
  CHECK(complexity_lower(1, 0.5, 1).value == 2.0);
  CHECK(complexity_lower(2, 0.5, 2).value == 1.0);
  CHECK_FALSE(complexity_lower(2, 0.5, 2).warnings.empty());
  CHECK_THROWS_AS(complexity_lower(0.5, 0.5, 1), UsageError);
  CHECK_THROWS_AS(complexity_lower(1, 0.5, 1, 0.0), UsageError);
}

TEST_CASE("complexity upper bound is monotone") {
  double prev = std::numeric_limits<double>::infinity();
  for (double eps : {0.01, 0.1, 0.5, 1.0, 10.0}) {
    const double v = complexity_upper(2.0, eps, 3).value;
    CHECK(v >= 1.0);
    CHECK(v <= prev);
    prev = v;
  }
  CHECK(complexity_upper(1.0, 0.1, 2).value < complexity_upper(2.0, 0.1, 2).value);
}

TEST_CASE("closed forms agree with an interpreted second path") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  for (int t = 0; t < 200; ++t) {
    const double D = u(rng), L = u(rng), d = u(rng), eps = u(rng), alpha = 1.0 + u(rng);
    const int n = 1 + t % 4;
    CHECK(ball_packing_bound(D, L, d, n).value ==
          doctest::Approx(std::pow(formula("2*x1*x2/x3 + 1", {L, D, d}), n)));
    CHECK(complexity_upper(D, eps, n).value == doctest::Approx(std::pow(formula("(2*x1 + x2)/x2", {D, eps}), n)));
    CHECK(complexity_lower(alpha, eps, n).value == doctest::Approx(std::pow(formula("1/(x1*x2)", {alpha, eps}), n)));
    const BoxDomain box({0, -D}, {L, d});
    CHECK(box_packing_bound(box, L, d).value ==
          doctest::Approx(formula("(x1/x3*x2 + 1)*(x1/x3*(x4 + x5) + 1)", {L, L, d, d, D})));
  }
}

TEST_CASE("radius and asphericity of boxes") {
  auto cube = box_radius_asphericity(BoxDomain({-1, -1}, {1, 1}), NormKind::Inf);
  CHECK(cube.radius == 1.0);
  CHECK(*cube.asphericity == 1.0);
  auto slab = box_radius_asphericity(BoxDomain({0, 0}, {4, 2}), NormKind::Inf);
  CHECK(slab.radius == 2.0);
  CHECK(*slab.asphericity == 2.0);
  auto two = box_radius_asphericity(BoxDomain({-1, -1}, {1, 1}), NormKind::Two);
  CHECK(two.radius == doctest::Approx(std::sqrt(2.0)));
  CHECK(*two.asphericity == doctest::Approx(std::sqrt(2.0)));
  auto one = box_radius_asphericity(BoxDomain({0, 0}, {4, 2}), NormKind::One);
  CHECK(one.radius == 3.0);
  CHECK(*one.asphericity == 3.0);
  auto flat = box_radius_asphericity(BoxDomain({0, 0}, {4, 0}), NormKind::Two);
  CHECK(flat.radius == 2.0);
  CHECK_FALSE(flat.asphericity.has_value());
}
