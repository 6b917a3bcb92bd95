#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "nic/core.hpp"
#include "nic/expr.hpp"

namespace nic::lipschitz {

enum class Method { JacobianGrid, SlopeSampling, UserSupplied };

std::string to_string(Method m);

/// A Lipschitz constant together with how it was obtained. `value` already
/// includes the safety factor (or sampling inflation).
struct LipschitzEstimate {
  double value = 0.0;
  Method method = Method::UserSupplied;
  double safety_factor = 1.0;
  std::size_t samples_used = 0;
  /// False when an operator norm had to be bounded via norm equivalence
  /// instead of computed exactly.
  bool exact_operator_norm = true;
  std::vector<std::string> warnings;
};

/// Smallest positive value the sampling estimator reports.
inline constexpr double kEstimateFloor = 1e-12;

/// Operator norm of `a` induced by `domain` on the input side and `image` on
/// the output side. Exact for all nine pairs as long as the dimension that is
/// enumerated (n for inf->1, inf->2; m for 2->1) is at most 20; otherwise a
/// norm-equivalence bound is returned and `*exact` is set to false.
double induced_norm(const expr::Matrix& a, NormKind domain, NormKind image,
                    bool* exact = nullptr);

/// Largest eigenvalue's square root of a^T a (cyclic Jacobi, tol 1e-10).
double spectral_norm(const expr::Matrix& a);

/// 1.05 for smooth expressions, 1.10 when any of them contains abs/min/max.
double default_safety(std::span<const expr::Expr> exprs, double base = 1.05);

/// Max of the induced Jacobian norm over a grid_per_dim^n lattice of the box
/// (corners included), times `safety`. Lattice points are pulled inward by the
/// finite-difference step so that differences never leave the box.
LipschitzEstimate jacobian_sup_bound(std::span<const expr::Expr> exprs, const BoxDomain& box,
                                     NormKind domain_norm, NormKind image_norm,
                                     std::size_t grid_per_dim, double safety,
                                     unsigned threads = 1);

using VectorFunction = std::function<Point(std::span<const double>)>;

/// Max of ||r(x) - r(y)|| / ||x - y|| over `pairs` uniformly drawn pairs,
/// times (1 + inflation). Heuristic: the result may under-estimate.
LipschitzEstimate slope_sampling_estimate(const VectorFunction& r, const BoxDomain& box,
                                          NormKind domain_norm, NormKind image_norm,
                                          std::size_t pairs, double inflation = 0.1,
                                          std::uint64_t seed = 0);

}  // namespace nic::lipschitz
