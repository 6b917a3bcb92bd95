#include <algorithm>
#include <cmath>
#include <limits>

#include "nic/errors.hpp"
#include "nic/oracle.hpp"

namespace nic::oracle {

namespace {

constexpr double kMinStep = 1e-9;
constexpr double kBoundaryOffset = 1e-9;

void snap_integral(const BoxDomain& box, Point& x) {
  for (std::size_t j = 0; j < x.size(); ++j) {
    x[j] = std::clamp(x[j], box.lower()[j], box.upper()[j]);
    if (box.is_integral(j))
      x[j] = std::clamp(std::round(x[j]), std::ceil(box.lower()[j]), std::floor(box.upper()[j]));
  }
}

// Pushes x radially out of the closest violated ball until all cuts hold or
// we give up after one pass per cut.
bool project_out_of_cuts(const RelaxedRegion& region, Point& x) {
  const BoxDomain& box = region.domain;
  for (std::size_t round = 0; round <= region.cuts.size(); ++round) {
    const Cut* nearest = nullptr;
    double nearest_dist = std::numeric_limits<double>::infinity();
    for (const Cut& c : region.cuts) {
      if (cut_satisfied(c, x)) continue;
      const double d = c.distance(x);
      if (d < nearest_dist) {
        nearest_dist = d;
        nearest = &c;
      }
    }
    if (nearest == nullptr) return true;

    Point dir(x.size(), 0.0);
    for (std::size_t j = 0; j < x.size(); ++j)
      if (nearest->uses(j)) dir[j] = x[j] - nearest->center[j];
    Cut probe = *nearest;
    probe.center.assign(x.size(), 0.0);
    if (probe.distance(dir) == 0.0) {
      // sitting on the center: head for the middle of the box
      const Point mid = box.center();
      for (std::size_t j = 0; j < x.size(); ++j)
        if (nearest->uses(j)) dir[j] = mid[j] - x[j];
      if (probe.distance(dir) == 0.0) {
        for (std::size_t j = 0; j < x.size(); ++j)
          if (nearest->uses(j)) {
            dir[j] = 1.0;
            break;
          }
      }
    }
    const double scale = (nearest->radius + kBoundaryOffset) / probe.distance(dir);
    for (std::size_t j = 0; j < x.size(); ++j)
      if (nearest->uses(j)) x[j] = nearest->center[j] + scale * dir[j];
    snap_integral(box, x);
  }
  return region.satisfies_cuts(x);
}

}  // namespace

OracleResult solve_local(const ObjectiveSpec& objective, const RelaxedRegion& region,
                         std::span<const double> start, const OracleConfig& config) {
  config.validate();
  const BoxDomain& box = region.domain;
  const std::size_t n = box.dimension();
  if (start.size() != n) throw UsageError("start point dimension does not match region");
  for (std::size_t j = 0; j < n; ++j)
    if (start[j] < box.lower()[j] - kIntegralityTol || start[j] > box.upper()[j] + kIntegralityTol)
      throw UsageError("start point lies outside the box");

  Point x(start.begin(), start.end());
  snap_integral(box, x);
  if (!project_out_of_cuts(region, x) || !region_membership(region, x))
    throw InfeasibleStartError("local oracle found no feasible point from the given start");

  OracleResult res;
  double fx = objective.evaluator(x);
  std::size_t evals = 1;

  const Point widths = box.widths();
  double step = 0.25 * *std::max_element(widths.begin(), widths.end());
  Point probe(n);
  while (step >= kMinStep) {
    bool improved = false;
    Point best_point;
    double best_value = fx;
    for (std::size_t j = 0; j < n; ++j) {
      if (widths[j] == 0.0) continue;
      const double s = box.is_integral(j) ? std::max(1.0, std::floor(step)) : step;
      for (const double sign : {1.0, -1.0}) {
        probe = x;
        probe[j] = std::clamp(x[j] + sign * s, box.lower()[j], box.upper()[j]);
        if (probe[j] == x[j] || !region_membership(region, probe)) continue;
        const double fp = objective.evaluator(probe);
        ++evals;
        if (fp < best_value) {
          best_value = fp;
          best_point = probe;
          improved = true;
        }
      }
    }
    if (improved) {
      x = std::move(best_point);
      fx = best_value;
    } else {
      step *= 0.5;
    }
    if (evals > config.node_limit)
      throw ResourceError("local search evaluation limit exceeded", x, fx,
                          std::numeric_limits<double>::infinity());
  }

  res.status = Status::Solved;
  res.point = std::move(x);
  res.value = fx;
  res.gap = std::numeric_limits<double>::infinity();
  res.nodes = evals;
  return res;
}

OracleResult LocalOracle::solve(const ObjectiveSpec& objective, const RelaxedRegion& region,
                                std::span<const double> hint) {
  if (hint.empty()) {
    const Point mid = region.domain.center();
    return solve_local(objective, region, mid, config_);
  }
  return solve_local(objective, region, hint, config_);
}

}  // namespace nic::oracle
