#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nic {

using Point = std::vector<double>;

/// Integrality tolerance used by every membership test.
inline constexpr double kIntegralityTol = 1e-9;

enum class NormKind { One, Two, Inf };

/// Parses "1", "2", "inf" (case-insensitive). Throws UsageError otherwise.
NormKind parse_norm(std::string_view text);
std::string to_string(NormKind norm);

/// Sum of absolute values, Euclidean length or max absolute value of `v`.
/// Throws UsageError on an empty vector.
double norm_eval(NormKind norm, std::span<const double> v);

/// Component-wise max(v_i, 0).
Point positive_part(std::span<const double> v);

/// ||r_+|| / L, the radius of the norm-induced ball around a point with
/// constraint values `r_value`.
double cut_radius(std::span<const double> r_value, double lipschitz, NormKind image_norm);

/// Compact box [lower, upper] with optional integrality per coordinate.
class BoxDomain {
 public:
  BoxDomain() = default;
  BoxDomain(Point lower, Point upper, std::vector<bool> integral = {});

  [[nodiscard]] std::size_t dimension() const noexcept { return lower_.size(); }
  [[nodiscard]] const Point& lower() const noexcept { return lower_; }
  [[nodiscard]] const Point& upper() const noexcept { return upper_; }
  [[nodiscard]] const std::vector<bool>& integral() const noexcept { return integral_; }
  [[nodiscard]] bool is_integral(std::size_t j) const { return integral_[j]; }
  [[nodiscard]] bool any_integral() const noexcept;

  [[nodiscard]] Point widths() const;
  [[nodiscard]] Point center() const;

  /// Inside the bounds and integer-valued on integral coordinates (both up to
  /// kIntegralityTol).
  [[nodiscard]] bool contains(std::span<const double> x) const;

 private:
  Point lower_;
  Point upper_;
  std::vector<bool> integral_;
};

/// One norm-ball exclusion: points must keep masked distance >= radius from
/// center. An empty mask means all coordinates.
struct Cut {
  Point center;
  double radius = 0.0;
  std::vector<bool> mask;
  NormKind norm = NormKind::Two;

  [[nodiscard]] bool uses(std::size_t j) const { return mask.empty() || mask[j]; }
  /// Norm of (x - center) restricted to the mask.
  [[nodiscard]] double distance(std::span<const double> x) const;
};

/// Builds a cut, validating radius >= 0 and mask length.
Cut make_cut(Point center, double radius, NormKind norm, std::vector<bool> mask = {});

/// A radius-0 cut is always satisfied; the boundary counts as satisfied.
bool cut_satisfied(const Cut& cut, std::span<const double> x);

/// Box plus accumulated cuts (the k-th relaxed set).
struct RelaxedRegion {
  BoxDomain domain;
  std::vector<Cut> cuts;

  [[nodiscard]] std::size_t dimension() const noexcept { return domain.dimension(); }
  /// Whether x satisfies every cut; ignores the box.
  [[nodiscard]] bool satisfies_cuts(std::span<const double> x) const;
};

bool region_membership(const RelaxedRegion& region, std::span<const double> x);

using ScalarFunction = std::function<double(std::span<const double>)>;

/// Objective with a Lipschitz constant valid w.r.t. `norm` on the domain.
struct ObjectiveSpec {
  ScalarFunction evaluator;
  double lipschitz_f = 1.0;
  NormKind norm = NormKind::Two;
};

/// Constraint function r = (r_1, ..., r_m) with r(x) <= 0 meaning feasible.
struct ConstraintSpec {
  std::vector<ScalarFunction> components;
  double global_L = 1.0;
  std::optional<std::vector<double>> component_L;
  NormKind image_norm = NormKind::Two;
  /// Per component: coordinates it depends on. Empty outer vector = all.
  std::vector<std::vector<bool>> active_masks;
  /// Optional point-dependent constant, must never exceed global_L.
  ScalarFunction pointwise_L;

  [[nodiscard]] std::size_t size() const noexcept { return components.size(); }
  [[nodiscard]] Point evaluate(std::span<const double> x) const;
};

struct Problem {
  BoxDomain domain;
  NormKind domain_norm = NormKind::Two;
  ObjectiveSpec objective;
  ConstraintSpec constraints;

  /// Throws ConfigError if the pieces disagree on dimensions or constants.
  void validate() const;
};

}  // namespace nic
