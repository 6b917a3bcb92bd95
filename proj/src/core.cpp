#include "nic/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "nic/errors.hpp"

namespace nic {

NormKind parse_norm(std::string_view text) {
  std::string lowered(text);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lowered == "1" || lowered == "one") return NormKind::One;
  if (lowered == "2" || lowered == "two") return NormKind::Two;
  if (lowered == "inf" || lowered == "infinity" || lowered == "max") return NormKind::Inf;
  throw UsageError("unknown norm '" + std::string(text) + "' (expected 1, 2 or inf)");
}

std::string to_string(NormKind norm) {
  switch (norm) {
    case NormKind::One: return "1";
    case NormKind::Two: return "2";
    case NormKind::Inf: return "inf";
  }
  return "?";
}

double norm_eval(NormKind norm, std::span<const double> v) {
  if (v.empty()) throw UsageError("norm of an empty vector");
  switch (norm) {
    case NormKind::One: {
      double s = 0.0;
      for (double x : v) s += std::abs(x);
      return s;
    }
    case NormKind::Two: {
      // scaled to avoid overflow for large entries
      double scale = 0.0;
      for (double x : v) scale = std::max(scale, std::abs(x));
      if (scale == 0.0) return 0.0;
      double s = 0.0;
      for (double x : v) {
        const double t = x / scale;
        s += t * t;
      }
      return scale * std::sqrt(s);
    }
    case NormKind::Inf: {
      double m = 0.0;
      for (double x : v) m = std::max(m, std::abs(x));
      return m;
    }
  }
  return 0.0;
}

Point positive_part(std::span<const double> v) {
  Point out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](double x) { return std::max(x, 0.0); });
  return out;
}

double cut_radius(std::span<const double> r_value, double lipschitz, NormKind image_norm) {
  if (!(lipschitz > 0.0)) throw UsageError("Lipschitz constant must be positive");
  const Point plus = positive_part(r_value);
  return norm_eval(image_norm, plus) / lipschitz;
}

BoxDomain::BoxDomain(Point lower, Point upper, std::vector<bool> integral)
    : lower_(std::move(lower)), upper_(std::move(upper)), integral_(std::move(integral)) {
  if (lower_.empty()) throw UsageError("box must have at least one coordinate");
  if (lower_.size() != upper_.size())
    throw UsageError("box lower/upper bounds differ in length");
  if (integral_.empty()) integral_.assign(lower_.size(), false);
  if (integral_.size() != lower_.size())
    throw UsageError("box integrality flags differ in length");
  for (std::size_t j = 0; j < lower_.size(); ++j) {
    if (!std::isfinite(lower_[j]) || !std::isfinite(upper_[j]))
      throw UsageError("box bounds must be finite (coordinate " + std::to_string(j + 1) + ")");
    if (lower_[j] > upper_[j])
      throw UsageError("box lower bound exceeds upper bound at coordinate " +
                       std::to_string(j + 1));
    if (integral_[j] && std::floor(upper_[j]) < std::ceil(lower_[j]))
      throw UsageError("integral coordinate " + std::to_string(j + 1) +
                       " has no integer in its bounds");
  }
}

bool BoxDomain::any_integral() const noexcept {
  return std::any_of(integral_.begin(), integral_.end(), [](bool b) { return b; });
}

Point BoxDomain::widths() const {
  Point w(dimension());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = upper_[j] - lower_[j];
  return w;
}

Point BoxDomain::center() const {
  Point c(dimension());
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = 0.5 * (lower_[j] + upper_[j]);
  return c;
}

bool BoxDomain::contains(std::span<const double> x) const {
  if (x.size() != dimension()) return false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] < lower_[j] - kIntegralityTol || x[j] > upper_[j] + kIntegralityTol) return false;
    if (integral_[j] && std::abs(x[j] - std::round(x[j])) > kIntegralityTol) return false;
  }
  return true;
}

double Cut::distance(std::span<const double> x) const {
  if (x.size() != center.size())
    throw UsageError("cut dimension " + std::to_string(center.size()) +
                     " does not match point dimension " + std::to_string(x.size()));
  double acc = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!uses(j)) continue;
    const double d = std::abs(x[j] - center[j]);
    switch (norm) {
      case NormKind::One: acc += d; break;
      case NormKind::Two: acc += d * d; break;
      case NormKind::Inf: acc = std::max(acc, d); break;
    }
  }
  return norm == NormKind::Two ? std::sqrt(acc) : acc;
}

Cut make_cut(Point center, double radius, NormKind norm, std::vector<bool> mask) {
  if (center.empty()) throw UsageError("cut center must not be empty");
  if (!(radius >= 0.0) || !std::isfinite(radius))
    throw UsageError("cut radius must be a finite nonnegative number");
  if (!mask.empty() && mask.size() != center.size())
    throw UsageError("cut mask length does not match center dimension");
  return Cut{std::move(center), radius, std::move(mask), norm};
}

bool cut_satisfied(const Cut& cut, std::span<const double> x) {
  const double d = cut.distance(x);
  if (cut.radius == 0.0) return true;
  return d >= cut.radius;
}

bool RelaxedRegion::satisfies_cuts(std::span<const double> x) const {
  return std::all_of(cuts.begin(), cuts.end(),
                     [&](const Cut& c) { return cut_satisfied(c, x); });
}

bool region_membership(const RelaxedRegion& region, std::span<const double> x) {
  if (x.size() != region.dimension()) return false;
  return region.domain.contains(x) && region.satisfies_cuts(x);
}

Point ConstraintSpec::evaluate(std::span<const double> x) const {
  Point r(components.size());
  for (std::size_t q = 0; q < components.size(); ++q) r[q] = components[q](x);
  return r;
}

void Problem::validate() const {
  const std::size_t n = domain.dimension();
  if (n == 0) throw ConfigError("problem has an empty domain");
  if (!objective.evaluator) throw ConfigError("problem has no objective");
  if (!(objective.lipschitz_f > 0.0)) throw ConfigError("objective Lipschitz constant must be positive");
  if (constraints.components.empty()) throw ConfigError("problem has no constraint components");
  if (!(constraints.global_L > 0.0)) throw ConfigError("global Lipschitz constant must be positive");
  if (constraints.component_L) {
    if (constraints.component_L->size() != constraints.size())
      throw ConfigError("component Lipschitz list length does not match constraint count");
    for (double l : *constraints.component_L)
      if (!(l > 0.0)) throw ConfigError("component Lipschitz constants must be positive");
  }
  if (!constraints.active_masks.empty()) {
    if (constraints.active_masks.size() != constraints.size())
      throw ConfigError("active mask list length does not match constraint count");
    for (const auto& m : constraints.active_masks)
      if (!m.empty() && m.size() != n) throw ConfigError("active mask length does not match dimension");
  }
}

}  // namespace nic
