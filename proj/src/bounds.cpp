#include "nic/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "nic/errors.hpp"

namespace nic::bounds {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw UsageError(std::string(name) + " must be a positive finite number");
}

}  // namespace

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::BoxPacking: return "box-packing";
    case BoundKind::LatticeCount: return "lattice-count";
    case BoundKind::BallPacking: return "ball-packing";
    case BoundKind::ComplexityLower: return "complexity-lower";
    case BoundKind::ComplexityUpper: return "complexity-upper";
  }
  return "?";
}

BoundReport box_packing_bound(const BoxDomain& box, double lipschitz, double delta) {
  require_positive(lipschitz, "Lipschitz constant");
  require_positive(delta, "delta");
  BoundReport rep{BoundKind::BoxPacking, 1.0, {{"L", lipschitz}, {"delta", delta}}, {}};
  if (delta / lipschitz >= 1.0)
    rep.warnings.emplace_back("delta/L >= 1: the packing bound assumes delta/L < 1");
  for (std::size_t j = 0; j < box.dimension(); ++j)
    rep.value *= (lipschitz / delta) * (box.upper()[j] - box.lower()[j]) + 1.0;
  return rep;
}

BoundReport lattice_count(const BoxDomain& box) {
  BoundReport rep{BoundKind::LatticeCount, 1.0, {}, {}};
  for (std::size_t j = 0; j < box.dimension(); ++j) {
    const double k = std::floor(box.upper()[j]) - std::ceil(box.lower()[j]) + 1.0;
    if (k <= 0.0) {
      rep.value = 0.0;
      rep.warnings.emplace_back("coordinate " + std::to_string(j + 1) +
                                " contains no integer; the bound is vacuous");
      return rep;
    }
    rep.value *= k;
  }
  return rep;
}

BoundReport ball_packing_bound(double radius, double lipschitz, double delta, int n) {
  if (!(radius >= 0.0) || !std::isfinite(radius))
    throw UsageError("ball radius must be a nonnegative finite number");
  require_positive(lipschitz, "Lipschitz constant");
  require_positive(delta, "delta");
  if (n < 1) throw UsageError("dimension must be positive");
  BoundReport rep{BoundKind::BallPacking,
                  std::pow(2.0 * lipschitz * radius / delta + 1.0, n),
                  {{"D", radius}, {"L", lipschitz}, {"delta", delta}, {"n", double(n)}},
                  {}};
  if (delta / lipschitz >= 1.0)
    rep.warnings.emplace_back("delta/L >= 1: the packing bound assumes delta/L < 1");
  return rep;
}

BoundReport complexity_upper(double rho, double epsilon, int n) {
  require_positive(rho, "radius rho");
  require_positive(epsilon, "epsilon");
  if (n < 1) throw UsageError("dimension must be positive");
  return {BoundKind::ComplexityUpper,
          std::pow((2.0 * rho + epsilon) / epsilon, n),
          {{"rho", rho}, {"epsilon", epsilon}, {"n", double(n)}},
          {}};
}

BoundReport complexity_lower(double alpha, double epsilon, int n, double c) {
  if (!(alpha >= 1.0)) throw UsageError("asphericity must be >= 1");
  require_positive(epsilon, "epsilon");
  require_positive(c, "constant c");
  if (n < 1) throw UsageError("dimension must be positive");
  return {BoundKind::ComplexityLower,
          std::pow(c / (alpha * epsilon), n),
          {{"alpha", alpha}, {"epsilon", epsilon}, {"n", double(n)}, {"c", c}},
          {"constant c is a free parameter, not a derived value"}};
}

double box_radius(const BoxDomain& box, NormKind norm) {
  Point half = box.widths();
  for (double& h : half) h *= 0.5;
  return norm_eval(norm, half);
}

RadiusAsphericity box_radius_asphericity(const BoxDomain& box, NormKind norm) {
  RadiusAsphericity out;
  out.radius = box_radius(box, norm);
  const Point w = box.widths();
  const double inscribed = 0.5 * *std::min_element(w.begin(), w.end());
  if (inscribed > 0.0) out.asphericity = out.radius / inscribed;
  return out;
}

}  // namespace nic::bounds
