#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nic/core.hpp"

namespace nic::bounds {

enum class BoundKind { BoxPacking, LatticeCount, BallPacking, ComplexityLower, ComplexityUpper };

std::string to_string(BoundKind kind);

struct BoundReport {
  BoundKind kind = BoundKind::BoxPacking;
  double value = 0.0;
  std::map<std::string, double> inputs;
  std::vector<std::string> warnings;
};

/// Iteration bound for an infeasible problem on a box under the max-norm:
/// prod_j ((L / delta) (u_j - l_j) + 1). Warns when delta / L >= 1.
BoundReport box_packing_bound(const BoxDomain& box, double lipschitz, double delta);

/// Number of integer points prod_j (floor(u_j) - ceil(l_j) + 1); 0 with a
/// warning if some coordinate has none.
BoundReport lattice_count(const BoxDomain& box);

/// (2 L D / delta + 1)^n for a Euclidean ball of radius D.
BoundReport ball_packing_bound(double radius, double lipschitz, double delta, int n);

/// ((2 rho + epsilon) / epsilon)^n oracle calls suffice for an
/// epsilon-approximate solution.
BoundReport complexity_upper(double rho, double epsilon, int n);

/// (c / (alpha epsilon))^n oracle calls are necessary. The constant c is not
/// known in closed form; 1 is only a placeholder.
BoundReport complexity_lower(double alpha, double epsilon, int n, double c = 1.0);

struct RadiusAsphericity {
  double radius = 0.0;
  /// Empty when some coordinate has zero width (no inscribed ball).
  std::optional<double> asphericity;
};

/// Circumscribed radius (around the box center) and the ratio to the largest
/// inscribed ball radius, both in `norm`.
RadiusAsphericity box_radius_asphericity(const BoxDomain& box, NormKind norm);

/// Just the radius part of box_radius_asphericity.
double box_radius(const BoxDomain& box, NormKind norm);

}  // namespace nic::bounds
