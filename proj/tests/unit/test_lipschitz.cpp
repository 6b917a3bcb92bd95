#include <doctest.h>

#include <cmath>
#include <random>

#include "nic/errors.hpp"
#include "nic/lipschitz.hpp"

using namespace nic;
using nic::expr::Expr;
using nic::expr::Matrix;

namespace {

// Brute-force operator norm: vertices of the unit ball for 1 and inf, a fine
// sweep of the unit circle for 2 (input dimension 2 only).
double brute_induced(const Matrix& a, NormKind p, NormKind q) {
  const std::size_t n = a.cols;
  auto image = [&](const Point& x) {
    Point y(a.rows, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i)
      for (std::size_t j = 0; j < n; ++j) y[i] += a(i, j) * x[j];
    return norm_eval(q, y);
  };
  double best = 0.0;
  if (p == NormKind::One) {
    for (std::size_t j = 0; j < n; ++j) {
      Point e(n, 0.0);
      e[j] = 1.0;
      best = std::max(best, image(e));
    }
  } else if (p == NormKind::Inf) {
    for (std::size_t s = 0; s < (std::size_t{1} << n); ++s) {
      Point e(n);
      for (std::size_t j = 0; j < n; ++j) e[j] = (s >> j) & 1U ? 1.0 : -1.0;
      best = std::max(best, image(e));
    }
  } else {
    REQUIRE(n == 2);
    const int steps = 2'000'000;
    for (int k = 0; k < steps; ++k) {
      const double t = M_PI * k / steps;
      best = std::max(best, image(Point{std::cos(t), std::sin(t)}));
    }
  }
  return best;
}

Matrix random_matrix(std::size_t m, std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  Matrix a(m, n);
  for (double& v : a.data) v = u(rng);
  return a;
}

}  // namespace

TEST_CASE("induced norms agree with brute force for all nine pairs") {
  std::mt19937_64 rng(17);
  const NormKind kinds[] = {NormKind::One, NormKind::Two, NormKind::Inf};
  for (int t = 0; t < 6; ++t) {
    for (std::size_t m : {1u, 2u, 3u}) {
      const Matrix a = random_matrix(m, 2, rng);
      for (NormKind p : kinds)
        for (NormKind q : kinds) {
          bool exact = false;
          const double v = lipschitz::induced_norm(a, p, q, &exact);
          CHECK(exact);
          CHECK(v == doctest::Approx(brute_induced(a, p, q)).epsilon(1e-9));
        }
    }
  }
  // wider inputs for the vertex-enumerable domains
  for (int t = 0; t < 5; ++t) {
    const Matrix a = random_matrix(3, 5, rng);
    for (NormKind p : {NormKind::One, NormKind::Inf})
      for (NormKind q : kinds)
        CHECK(lipschitz::induced_norm(a, p, q) == doctest::Approx(brute_induced(a, p, q)));
  }
}

TEST_CASE("spectral norm of simple matrices") {
  Matrix d(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = -4.0;
  CHECK(lipschitz::spectral_norm(d) == doctest::Approx(4.0));
  Matrix r(1, 2);
  r(0, 0) = -1.0;
  r(0, 1) = -1.0;
  CHECK(lipschitz::spectral_norm(r) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("grid bound on a linear map equals its induced norm") {
  std::vector<Expr> f{Expr::parse("2*x1 - x2 + 0.5*x3", 3), Expr::parse("-x1 + 3*x3", 3)};
  Matrix a(2, 3);
  a(0, 0) = 2;
  a(0, 1) = -1;
  a(0, 2) = 0.5;
  a(1, 0) = -1;
  a(1, 2) = 3;
  BoxDomain box({-1, -1, -1}, {1, 1, 1});
  const NormKind kinds[] = {NormKind::One, NormKind::Two, NormKind::Inf};
  for (NormKind p : kinds)
    for (NormKind q : kinds) {
      auto est = lipschitz::jacobian_sup_bound(f, box, p, q, 3, 1.0);
      CHECK(est.value == doctest::Approx(lipschitz::induced_norm(a, p, q)).epsilon(1e-6));
      CHECK(est.method == lipschitz::Method::JacobianGrid);
      CHECK(est.samples_used == 27);
    }
  std::vector<Expr> x1{Expr::parse("x1", 2)};
  CHECK(lipschitz::jacobian_sup_bound(x1, BoxDomain({0, 0}, {1, 1}), NormKind::Two, NormKind::Two, 2, 1.0)
            .value == doctest::Approx(1.0));
}

TEST_CASE("grid bound reproduces the published constants") {
  std::vector<Expr> r{Expr::parse("-sin(x1) - x2", 2)};
  BoxDomain box({-1, -1}, {1, 1});
  auto est = lipschitz::jacobian_sup_bound(r, box, NormKind::Two, NormKind::Two, 256, 1.0);
  CHECK(est.value >= 1.4142);
  CHECK(est.value <= 1.4150);

  std::vector<Expr> r1{Expr::parse("cos(6*x1)/2 - x2 + 1.8", 2)};
  BoxDomain comp({1, 0}, {10, 4});
  auto e1 = lipschitz::jacobian_sup_bound(r1, comp, NormKind::Two, NormKind::Two, 256, 1.0);
  CHECK(e1.value * e1.value == doctest::Approx(10.0).epsilon(0.02));
}

TEST_CASE("nested grid refinement never lowers the bound") {
  std::vector<Expr> r{Expr::parse("-2*sin(4*x1)/sqrt(x1) + x2 - 2", 2)};
  BoxDomain box({1, 0}, {10, 4});
  double prev = 0.0;
  for (std::size_t k : {3u, 5u, 9u, 17u, 33u, 65u}) {
    const double v = lipschitz::jacobian_sup_bound(r, box, NormKind::Two, NormKind::Two, k, 1.0).value;
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
}

TEST_CASE("grid bound is independent of the thread count") {
  std::vector<Expr> r{Expr::parse("cos(6*x1)/2 - x2 + 1.8", 2),
                      Expr::parse("-2*sin(4*x1)/sqrt(x1) + x2 - 2", 2)};
  BoxDomain box({1, 0}, {10, 4});
  const double one = lipschitz::jacobian_sup_bound(r, box, NormKind::Two, NormKind::Two, 64, 1.05, 1).value;
  const double four = lipschitz::jacobian_sup_bound(r, box, NormKind::Two, NormKind::Two, 64, 1.05, 4).value;
  CHECK(one == four);
}

TEST_CASE("grid bound rejects bad arguments") {
  std::vector<Expr> r{Expr::parse("x1", 1)};
  BoxDomain box({0}, {1});
  CHECK_THROWS_AS(lipschitz::jacobian_sup_bound(r, box, NormKind::Two, NormKind::Two, 1, 1.0), UsageError);
  CHECK_THROWS_AS(lipschitz::jacobian_sup_bound(r, box, NormKind::Two, NormKind::Two, 4, 0.9), UsageError);
  std::vector<Expr> bad{Expr::parse("sqrt(x1)", 1)};
  CHECK_THROWS_AS(lipschitz::jacobian_sup_bound(bad, BoxDomain({-1}, {1}), NormKind::Two, NormKind::Two, 4, 1.0),
                  EvalError);
}

TEST_CASE("default safety doubles the margin for kinks") {
  std::vector<Expr> smooth{Expr::parse("sin(x1)", 1)};
  std::vector<Expr> kinked{Expr::parse("sin(x1)", 1), Expr::parse("abs(x1)", 1)};
  CHECK(lipschitz::default_safety(smooth) == doctest::Approx(1.05));
  CHECK(lipschitz::default_safety(kinked) == doctest::Approx(1.10));
}

TEST_CASE("slope sampling") {
  BoxDomain unit({0}, {1});
  auto twice = [](std::span<const double> x) { return Point{2 * x[0]}; };
  auto est = lipschitz::slope_sampling_estimate(twice, unit, NormKind::Two, NormKind::Two, 10'000, 0.0, 1);
  CHECK(est.value >= 1.9);
  CHECK(est.value <= 2.0 + 1e-9);
  CHECK(est.method == lipschitz::Method::SlopeSampling);
  CHECK(est.samples_used == 10'000);

  auto constant = [](std::span<const double>) { return Point{3.0}; };
  auto flat = lipschitz::slope_sampling_estimate(constant, unit, NormKind::Two, NormKind::Two, 100);
  CHECK(flat.value == lipschitz::kEstimateFloor);
  CHECK_FALSE(flat.warnings.empty());

  auto sine = [](std::span<const double> x) { return Point{-std::sin(x[0]) - x[1]}; };
  BoxDomain sq({-1, -1}, {1, 1});
  auto s = lipschitz::slope_sampling_estimate(sine, sq, NormKind::Two, NormKind::Two, 100'000, 0.0, 3);
  CHECK(s.value >= 1.30);
  CHECK(s.value <= 1.4143);

  auto a = lipschitz::slope_sampling_estimate(sine, sq, NormKind::Two, NormKind::Two, 500, 0.1, 42);
  auto b = lipschitz::slope_sampling_estimate(sine, sq, NormKind::Two, NormKind::Two, 500, 0.1, 42);
  CHECK(a.value == b.value);

  BoxDomain point({0.5}, {0.5});
  CHECK_THROWS(lipschitz::slope_sampling_estimate(twice, point, NormKind::Two, NormKind::Two, 10));
}
