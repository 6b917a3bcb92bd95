#include "nic/lipschitz.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <thread>

#include "nic/errors.hpp"

namespace nic::lipschitz {

namespace {

constexpr std::size_t kMaxEnumeration = 20;
constexpr double kFiniteDiffStep = 1e-6;

NormKind dual(NormKind p) {
  switch (p) {
    case NormKind::One: return NormKind::Inf;
    case NormKind::Two: return NormKind::Two;
    case NormKind::Inf: return NormKind::One;
  }
  return NormKind::Two;
}

// max over sign vectors s in {-1,1}^k of || M s ||_q, M given column-wise via
// apply(s, out).
template <class Apply>
double max_over_signs(std::size_t k, std::size_t out_dim, NormKind q, Apply apply) {
  std::vector<double> s(k, 1.0);
  std::vector<double> out(out_dim);
  double best = 0.0;
  // s and -s give the same norm, so fix s[0] = +1
  const std::uint64_t count = std::uint64_t{1} << (k - 1);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    for (std::size_t i = 1; i < k; ++i) s[i] = (mask >> (i - 1)) & 1U ? -1.0 : 1.0;
    apply(s, out);
    best = std::max(best, norm_eval(q, out));
  }
  return best;
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::JacobianGrid: return "jacobian-grid";
    case Method::SlopeSampling: return "slope-sampling";
    case Method::UserSupplied: return "user-supplied";
  }
  return "?";
}

double spectral_norm(const expr::Matrix& a) {
  const std::size_t n = a.cols;
  if (n == 0 || a.rows == 0) return 0.0;
  // S = a^T a
  std::vector<double> s(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t r = 0; r < a.rows; ++r) acc += a(r, i) * a(r, j);
      s[i * n + j] = s[j * n + i] = acc;
    }
  auto at = [&](std::size_t i, std::size_t j) -> double& { return s[i * n + j]; };
  double scale = 0.0;
  for (double v : s) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    if (std::sqrt(off) <= 1e-10 * scale) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - sn * akq;
          at(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - sn * aqk;
          at(q, k) = sn * apk + c * aqk;
        }
      }
    }
  }
  double lambda = 0.0;
  for (std::size_t i = 0; i < n; ++i) lambda = std::max(lambda, at(i, i));
  return std::sqrt(std::max(lambda, 0.0));
}

double induced_norm(const expr::Matrix& a, NormKind domain, NormKind image, bool* exact) {
  if (exact) *exact = true;
  const std::size_t m = a.rows;
  const std::size_t n = a.cols;
  if (m == 0 || n == 0) throw UsageError("induced norm of an empty matrix");

  if (domain == NormKind::One) {
    // max column norm
    double best = 0.0;
    std::vector<double> col(m);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < m; ++i) col[i] = a(i, j);
      best = std::max(best, norm_eval(image, col));
    }
    return best;
  }
  if (image == NormKind::Inf) {
    // max dual norm of a row
    double best = 0.0;
    std::vector<double> row(n);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) row[j] = a(i, j);
      best = std::max(best, norm_eval(dual(domain), row));
    }
    return best;
  }
  if (domain == NormKind::Two && image == NormKind::Two) return spectral_norm(a);

  if (domain == NormKind::Inf) {
    // convex in x, so the max over the cube sits at a vertex
    if (n <= kMaxEnumeration) {
      return max_over_signs(n, m, image, [&](const std::vector<double>& s, std::vector<double>& out) {
        for (std::size_t i = 0; i < m; ++i) {
          double acc = 0.0;
          for (std::size_t j = 0; j < n; ++j) acc += a(i, j) * s[j];
          out[i] = acc;
        }
      });
    }
    if (exact) *exact = false;
    const double sigma = spectral_norm(a) * std::sqrt(static_cast<double>(n));
    return image == NormKind::One ? sigma * std::sqrt(static_cast<double>(m)) : sigma;
  }
  // domain Two, image One: ||A||_{2->1} = ||A^T||_{inf->2}
  if (m <= kMaxEnumeration) {
    return max_over_signs(m, n, NormKind::Two, [&](const std::vector<double>& s, std::vector<double>& out) {
      for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < m; ++i) acc += a(i, j) * s[i];
        out[j] = acc;
      }
    });
  }
  if (exact) *exact = false;
  return spectral_norm(a) * std::sqrt(static_cast<double>(m));
}

double default_safety(std::span<const expr::Expr> exprs, double base) {
  const bool kinked = std::any_of(exprs.begin(), exprs.end(),
                                  [](const expr::Expr& e) { return e.has_nonsmooth(); });
  return kinked ? 1.0 + 2.0 * (base - 1.0) : base;
}

LipschitzEstimate jacobian_sup_bound(std::span<const expr::Expr> exprs, const BoxDomain& box,
                                     NormKind domain_norm, NormKind image_norm,
                                     std::size_t grid_per_dim, double safety, unsigned threads) {
  if (exprs.empty()) throw UsageError("no expressions to bound");
  if (grid_per_dim < 2) throw UsageError("grid must have at least 2 points per dimension");
  if (!(safety >= 1.0)) throw UsageError("safety factor must be >= 1");
  const std::size_t n = box.dimension();
  for (const auto& e : exprs)
    if (e.dimension() != n) throw UsageError("expression dimension does not match box");

  double total = 1.0;
  for (std::size_t j = 0; j < n; ++j) total *= static_cast<double>(grid_per_dim);
  if (total > 1e9) throw UsageError("grid too large (" + std::to_string(total) + " points)");
  const auto points = static_cast<std::uint64_t>(total);

  // coordinate values per dimension, kept a finite-difference step inside the box
  std::vector<std::vector<double>> axis(n);
  for (std::size_t j = 0; j < n; ++j) {
    double lo = box.lower()[j];
    double hi = box.upper()[j];
    if (hi - lo > 4.0 * kFiniteDiffStep) {
      lo += kFiniteDiffStep;
      hi -= kFiniteDiffStep;
    }
    axis[j].resize(grid_per_dim);
    for (std::size_t i = 0; i < grid_per_dim; ++i)
      axis[j][i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid_per_dim - 1);
  }

  threads = std::max(1U, threads);
  std::vector<double> best(threads, 0.0);
  std::vector<char> all_exact(threads, 1);
  std::vector<std::exception_ptr> errors(threads);

  auto worker = [&](unsigned t) {
    try {
      Point x(n);
      for (std::uint64_t idx = t; idx < points; idx += threads) {
        std::uint64_t rem = idx;
        for (std::size_t j = 0; j < n; ++j) {
          x[j] = axis[j][rem % grid_per_dim];
          rem /= grid_per_dim;
        }
        const expr::Matrix jac = expr::finite_diff_jacobian(exprs, x, kFiniteDiffStep);
        bool exact = true;
        best[t] = std::max(best[t], induced_norm(jac, domain_norm, image_norm, &exact));
        if (!exact) all_exact[t] = 0;
      }
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };

  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  LipschitzEstimate est;
  est.method = Method::JacobianGrid;
  est.safety_factor = safety;
  est.samples_used = static_cast<std::size_t>(points);
  est.exact_operator_norm =
      std::all_of(all_exact.begin(), all_exact.end(), [](char c) { return c != 0; });
  const double sup = *std::max_element(best.begin(), best.end());
  est.value = sup * safety;
  if (!est.exact_operator_norm)
    est.warnings.emplace_back("operator norm bounded via norm equivalence (dimension > 20)");
  if (!(est.value > 0.0)) {
    est.value = kEstimateFloor;
    est.warnings.emplace_back("Jacobian vanished on the grid; reporting floor 1e-12");
  }
  return est;
}

LipschitzEstimate slope_sampling_estimate(const VectorFunction& r, const BoxDomain& box,
                                          NormKind domain_norm, NormKind image_norm,
                                          std::size_t pairs, double inflation,
                                          std::uint64_t seed) {
  if (pairs == 0) throw UsageError("need at least one sample pair");
  if (!(inflation >= 0.0)) throw UsageError("inflation must be nonnegative");
  const std::size_t n = box.dimension();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&](Point& p) {
    for (std::size_t j = 0; j < n; ++j)
      p[j] = box.lower()[j] + unit(rng) * (box.upper()[j] - box.lower()[j]);
  };

  Point x(n), y(n), diff_r;
  double best = 0.0;
  for (std::size_t k = 0; k < pairs; ++k) {
    int retries = 0;
    for (;;) {
      draw(x);
      draw(y);
      if (x != y) break;
      if (++retries > 100) throw UsageError("degenerate sample pairs: box has no extent");
    }
    const Point rx = r(x);
    const Point ry = r(y);
    diff_r.resize(rx.size());
    for (std::size_t q = 0; q < rx.size(); ++q) diff_r[q] = rx[q] - ry[q];
    Point dx(n);
    for (std::size_t j = 0; j < n; ++j) dx[j] = x[j] - y[j];
    best = std::max(best, norm_eval(image_norm, diff_r) / norm_eval(domain_norm, dx));
  }

  LipschitzEstimate est;
  est.method = Method::SlopeSampling;
  est.safety_factor = 1.0 + inflation;
  est.samples_used = pairs;
  est.value = best * (1.0 + inflation);
  if (!(est.value > 0.0)) {
    est.value = kEstimateFloor;
    est.warnings.emplace_back("all sampled slopes were zero; reporting floor 1e-12");
  }
  return est;
}

}  // namespace nic::lipschitz
