#include <doctest.h>

#include <cmath>
#include <random>

#include "nic/errors.hpp"
#include "nic/reform.hpp"

using namespace nic;
using namespace nic::reform;

TEST_CASE("1-norm encoding size") {
  auto s = reformulate_1norm(Point{0.1, -0.2}, 0.5, 4.0);
  CHECK(s.constraints.size() == 11);
  CHECK(s.continuous_vars == std::vector<std::string>{"y1", "y2"});
  CHECK(s.binary_vars == std::vector<std::string>{"z1", "z2"});
  CHECK(s.given_vars == std::vector<std::string>{"x1", "x2"});
  for (std::size_t n = 1; n <= 4; ++n)
    CHECK(reformulate_1norm(Point(n, 0.0), 1.0, 2.0).constraints.size() == 5 * n + 1);
}

TEST_CASE("max-norm encoding size and roster") {
  auto s = reformulate_infnorm(Point{0, 0, 0}, 0.5, 4.0);
  CHECK(s.constraints.size() == 9 * 3 + 2);
  CHECK(s.binary_vars == std::vector<std::string>{"z1", "z2", "z3", "u1", "u2", "u3"});
  CHECK(s.continuous_vars == std::vector<std::string>{"y1", "y2", "y3", "w1", "w2", "w3"});
}

TEST_CASE("masked encoding only touches masked coordinates") {
  auto s = reformulate_1norm(Point{0, 0, 0}, 0.5, 4.0, {false, true, true});
  CHECK(s.constraints.size() == 11);
  CHECK(s.given_vars == std::vector<std::string>{"x2", "x3"});
  CHECK(verify_by_enumeration(s, Point{9.0, 0.3, 0.3}));
  CHECK_FALSE(verify_by_enumeration(s, Point{9.0, 0.1, 0.1}));
}

TEST_CASE("encodings agree with the norm on random points") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0), r(0.0, 2.0);
  for (NormKind norm : {NormKind::One, NormKind::Inf}) {
    for (std::size_t n = 1; n <= 3; ++n) {
      const BoxDomain box(Point(n, -1.0), Point(n, 1.0));
      const double big_M = 2.0 * default_big_M(box, norm);
      int checked = 0;
      for (int t = 0; t < 60; ++t) {
        Point a(n), x(n);
        for (std::size_t j = 0; j < n; ++j) {
          a[j] = u(rng);
          x[j] = u(rng);
        }
        const double b = r(rng);
        if (b <= 0.0) continue;
        Point d(n);
        for (std::size_t j = 0; j < n; ++j) d[j] = x[j] - a[j];
        const double dist = norm_eval(norm, d);
        if (std::abs(dist - b) < 1e-9) continue;
        auto sys = norm == NormKind::One ? reformulate_1norm(a, b, big_M) : reformulate_infnorm(a, b, big_M);
        CHECK(verify_by_enumeration(sys, x) == (dist >= b));
        ++checked;
      }
      CHECK(checked > 50);
    }
  }
}

TEST_CASE("the box diameter alone is not a safe big-M") {
  const BoxDomain box({-1.0}, {1.0});
  const double d = default_big_M(box, NormKind::One);
  CHECK(d == 2.0);
  const Point a{-1.0}, x{1.0};
  CHECK_FALSE(verify_by_enumeration(reformulate_1norm(a, 1.0, d), x));
  CHECK_FALSE(verify_by_enumeration(reformulate_infnorm(a, 1.0, d), x));
  CHECK(verify_by_enumeration(reformulate_1norm(a, 1.0, 2.0 * d), x));
  CHECK(verify_by_enumeration(reformulate_infnorm(a, 1.0, 2.0 * d), x));
}

TEST_CASE("too small a big-M cuts off valid points") {
  const Point a{0.0}, x{5.0};
  CHECK_FALSE(verify_by_enumeration(reformulate_1norm(a, 1.0, 1.0), x));
  CHECK_FALSE(verify_by_enumeration(reformulate_infnorm(a, 1.0, 1.0), x));
  const BoxDomain box({-5.0}, {5.0});
  CHECK(default_big_M(box, NormKind::One) == 10.0);
  CHECK(verify_by_enumeration(reformulate_1norm(a, 1.0, default_big_M(box, NormKind::One)), x));
  CHECK(verify_by_enumeration(reformulate_infnorm(a, 1.0, default_big_M(box, NormKind::Inf)), x));
}

TEST_CASE("reformulation argument checks") {
  CHECK_THROWS_AS(reformulate_1norm(Point{0.0}, 0.0, 1.0), UsageError);
  CHECK_THROWS_AS(reformulate_1norm(Point{0.0}, 1.0, 0.0), UsageError);
  CHECK_THROWS_AS(reformulate_1norm(Point{}, 1.0, 1.0), UsageError);
  CHECK_THROWS_AS(reformulate_infnorm(Point{0.0, 0.0}, 1.0, 1.0, {false, false}), UsageError);
  CHECK_THROWS_AS(verify_by_enumeration(reformulate_1norm(Point{0.0}, 1.0, 1.0), Point{0.0, 1.0}), UsageError);
  CHECK_THROWS_AS(verify_by_enumeration(reformulate_infnorm(Point(13, 0.0), 1.0, 1.0), Point(13, 0.0)), UsageError);
}

TEST_CASE("LP export") {
  const BoxDomain box({-1, -1}, {1, 1});
  std::vector<ReformSystem> systems{reformulate_1norm(Point{-1, -1}, 1.3, 4.0),
                                    reformulate_1norm(Point{0.5, 0}, 0.25, 4.0)};
  const Point obj{1.0, 4.0};
  const std::string lp = export_lp(systems, obj, box);
  CHECK(lp.find("Minimize\n obj: 1 x1 + 4 x2\n") != std::string::npos);
  CHECK(lp.find(" cut0_sum: 1 c0_y1 + 1 c0_y2 >= 1.3\n") != std::string::npos);
  CHECK(lp.find(" cut1_pa1: 1 c1_y1 - 1 x1 + 4 c1_z1 >= -0.5\n") != std::string::npos);
  CHECK(lp.find("Binaries\n c0_z1\n c0_z2\n c1_z1\n c1_z2\nEnd\n") != std::string::npos);
  CHECK(lp.find(" -1 <= x1 <= 1\n") != std::string::npos);
  std::size_t rows = 0;
  for (std::size_t pos = lp.find("\n cut"); pos != std::string::npos; pos = lp.find("\n cut", pos + 1)) ++rows;
  CHECK(rows == 22);
  CHECK(export_lp(systems, obj, box) == lp);

  const std::string empty = export_lp({}, obj, box);
  CHECK(empty.find("Subject To\nBounds\n") != std::string::npos);
  CHECK(empty.find("Binaries") == std::string::npos);

  std::vector<QuadraticCut> quad{{Point{1, 0}, 0.5, {}}};
  const std::string q = export_lp({}, obj, box, quad);
  CHECK(q.find(" cutq0: - 2 x1 + [ x1 ^2 + x2 ^2 ] >= -0.75\n") != std::string::npos);

  const BoxDomain ints({0, 0}, {3, 2}, {true, false});
  CHECK(export_lp({}, obj, ints).find("Generals\n x1\n") != std::string::npos);
  CHECK_THROWS_AS(export_lp(systems, Point{1.0}, box), UsageError);
}
