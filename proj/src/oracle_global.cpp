#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <vector>

#include "nic/errors.hpp"
#include "nic/oracle.hpp"

namespace nic::oracle {

void OracleConfig::validate() const {
  if (!(tolerance > 0.0)) throw UsageError("oracle tolerance must be positive");
  if (node_limit == 0) throw UsageError("oracle node limit must be positive");
  if (!(box_min_width > 0.0)) throw UsageError("oracle minimum box width must be positive");
}

namespace {

double accumulate(NormKind norm, double acc, double d) {
  switch (norm) {
    case NormKind::One: return acc + d;
    case NormKind::Two: return acc + d * d;
    case NormKind::Inf: return std::max(acc, d);
  }
  return acc;
}

double finish(NormKind norm, double acc) { return norm == NormKind::Two ? std::sqrt(acc) : acc; }

}  // namespace

double max_distance_to_box(const Cut& cut, std::span<const double> lower,
                           std::span<const double> upper) {
  double acc = 0.0;
  for (std::size_t j = 0; j < lower.size(); ++j) {
    if (!cut.uses(j)) continue;
    const double d = std::max(std::abs(lower[j] - cut.center[j]), std::abs(upper[j] - cut.center[j]));
    acc = accumulate(cut.norm, acc, d);
  }
  return finish(cut.norm, acc);
}

double min_distance_to_box(const Cut& cut, std::span<const double> lower,
                           std::span<const double> upper) {
  double acc = 0.0;
  for (std::size_t j = 0; j < lower.size(); ++j) {
    if (!cut.uses(j)) continue;
    const double a = cut.center[j];
    const double d = std::max({lower[j] - a, 0.0, a - upper[j]});
    acc = accumulate(cut.norm, acc, d);
  }
  return finish(cut.norm, acc);
}

namespace {

constexpr std::size_t kSamplesPerBox = 32;
constexpr std::size_t kMaxCornerDimension = 10;
constexpr unsigned kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

double radical_inverse(std::uint64_t i, unsigned base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

struct Node {
  Point lower;
  Point upper;
  std::vector<std::uint32_t> active;  // cuts straddling this box
  double lb = 0.0;
};

struct QueueEntry {
  double lb;
  std::uint64_t serial;
  std::size_t slot;
  bool operator>(const QueueEntry& o) const {
    if (lb != o.lb) return lb > o.lb;
    return serial > o.serial;
  }
};

class BranchAndBound {
 public:
  BranchAndBound(const ObjectiveSpec& objective, const RelaxedRegion& region,
                 const OracleConfig& config)
      : objective_(objective), region_(region), config_(config), n_(region.dimension()) {}

  OracleResult run() {
    const BoxDomain& box = region_.domain;
    Node root;
    root.lower = box.lower();
    root.upper = box.upper();
    for (std::size_t j = 0; j < n_; ++j) {
      if (!box.is_integral(j)) continue;
      root.lower[j] = std::ceil(root.lower[j] - kIntegralityTol);
      root.upper[j] = std::floor(root.upper[j] + kIntegralityTol);
    }
    root.active.resize(region_.cuts.size());
    for (std::uint32_t i = 0; i < root.active.size(); ++i) root.active[i] = i;

    if (n_ <= kMaxCornerDimension) try_corners(root);
    admit(std::move(root));

    while (!queue_.empty()) {
      const QueueEntry top = queue_.top();
      if (best_value_ - std::min(top.lb, unresolved_lb_) <= config_.tolerance) break;
      queue_.pop();
      Node node = std::move(pool_[top.slot]);
      free_.push_back(top.slot);
      if (node.lb >= best_value_ - config_.tolerance) continue;
      branch(std::move(node));
    }

    OracleResult res;
    res.nodes = nodes_;
    double global_lb = unresolved_lb_;
    if (!queue_.empty()) global_lb = std::min(global_lb, queue_.top().lb);
    if (!has_incumbent_) {
      if (std::isfinite(unresolved_lb_))
        throw ResourceError("sub-boxes reached the minimum width without a feasible point",
                            {}, best_value_, std::numeric_limits<double>::infinity());
      res.status = Status::Infeasible;
      return res;
    }
    const double gap = std::max(0.0, best_value_ - std::min(global_lb, best_value_));
    if (gap > config_.tolerance)
      throw ResourceError("sub-boxes reached the minimum width before the gap closed",
                          best_point_, best_value_, gap);
    res.status = Status::Solved;
    res.point = best_point_;
    res.value = best_value_;
    res.gap = gap;
    return res;
  }

 private:
  // Evaluates the node, drops it if it cannot hold a better point, queues it
  // otherwise.
  void admit(Node node) {
    if (++nodes_ > config_.node_limit) {
      const double lb = queue_.empty() ? node.lb : std::min(node.lb, queue_.top().lb);
      throw ResourceError("oracle node limit exceeded", best_point_, best_value_,
                          has_incumbent_ ? best_value_ - lb : std::numeric_limits<double>::infinity());
    }
    // classify cuts: excluded box, irrelevant cut, or straddling
    std::vector<std::uint32_t> still;
    still.reserve(node.active.size());
    for (std::uint32_t ci : node.active) {
      const Cut& cut = region_.cuts[ci];
      if (cut.radius == 0.0) continue;
      if (max_distance_to_box(cut, node.lower, node.upper) < cut.radius) return;
      if (min_distance_to_box(cut, node.lower, node.upper) >= cut.radius) continue;
      still.push_back(ci);
    }
    node.active = std::move(still);

    Point c(n_);
    double acc = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      double v = 0.5 * (node.lower[j] + node.upper[j]);
      if (region_.domain.is_integral(j))
        v = std::clamp(std::round(v), node.lower[j], node.upper[j]);
      c[j] = v;
      acc = accumulate(objective_.norm, acc, std::max(v - node.lower[j], node.upper[j] - v));
    }
    const double rho = finish(objective_.norm, acc);
    const double fc = objective_.evaluator(c);
    node.lb = fc - objective_.lipschitz_f * rho;

    if (feasible_in(node, c)) {
      offer(c, fc);
    } else {
      Point s(n_);
      for (std::uint64_t i = 1; i <= kSamplesPerBox; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
          double v = node.lower[j] +
                     radical_inverse(i, kPrimes[j % std::size(kPrimes)]) * (node.upper[j] - node.lower[j]);
          if (region_.domain.is_integral(j))
            v = std::clamp(std::round(v), node.lower[j], node.upper[j]);
          s[j] = v;
        }
        if (feasible_in(node, s)) {
          offer(s, objective_.evaluator(s));
          break;
        }
      }
    }

    if (node.lb >= best_value_ - config_.tolerance) return;
    std::size_t slot;
    if (!free_.empty()) {
      slot = free_.back();
      free_.pop_back();
      pool_[slot] = std::move(node);
    } else {
      slot = pool_.size();
      pool_.push_back(std::move(node));
    }
    queue_.push(QueueEntry{pool_[slot].lb, serial_++, slot});
  }

  void branch(Node node) {
    std::size_t split = n_;
    double widest = -1.0;
    for (std::size_t j = 0; j < n_; ++j) {
      const double w = node.upper[j] - node.lower[j];
      const bool integral = region_.domain.is_integral(j);
      if (integral ? w < 1.0 : w < config_.box_min_width) continue;
      if (w > widest) {
        widest = w;
        split = j;
      }
    }
    if (split == n_) {
      unresolved_lb_ = std::min(unresolved_lb_, node.lb);
      return;
    }
    Node left = node;
    Node right = std::move(node);
    if (region_.domain.is_integral(split)) {
      const double mid = std::floor(0.5 * (left.lower[split] + left.upper[split]));
      left.upper[split] = mid;
      right.lower[split] = mid + 1.0;
    } else {
      const double mid = 0.5 * (left.lower[split] + left.upper[split]);
      left.upper[split] = mid;
      right.lower[split] = mid;
    }
    admit(std::move(left));
    admit(std::move(right));
  }

  void try_corners(const Node& root) {
    Point x(n_);
    const std::uint64_t count = std::uint64_t{1} << n_;
    for (std::uint64_t mask = 0; mask < count; ++mask) {
      for (std::size_t j = 0; j < n_; ++j) x[j] = (mask >> j) & 1U ? root.upper[j] : root.lower[j];
      if (feasible_in(root, x)) offer(x, objective_.evaluator(x));
    }
  }

  bool feasible_in(const Node& node, std::span<const double> x) const {
    for (std::uint32_t ci : node.active)
      if (!cut_satisfied(region_.cuts[ci], x)) return false;
    return true;
  }

  // value first, then lexicographically smallest point
  void offer(std::span<const double> x, double value) {
    if (has_incumbent_) {
      if (value > best_value_) return;
      if (value == best_value_ &&
          !std::lexicographical_compare(x.begin(), x.end(), best_point_.begin(), best_point_.end()))
        return;
    }
    if (!region_membership(region_, x)) return;
    has_incumbent_ = true;
    best_value_ = value;
    best_point_.assign(x.begin(), x.end());
  }

  const ObjectiveSpec& objective_;
  const RelaxedRegion& region_;
  const OracleConfig& config_;
  std::size_t n_;

  std::vector<Node> pool_;
  std::vector<std::size_t> free_;
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> queue_;
  std::uint64_t serial_ = 0;
  std::size_t nodes_ = 0;

  bool has_incumbent_ = false;
  double best_value_ = std::numeric_limits<double>::infinity();
  Point best_point_;
  double unresolved_lb_ = std::numeric_limits<double>::infinity();
};

}  // namespace

OracleResult solve_global(const ObjectiveSpec& objective, const RelaxedRegion& region,
                          const OracleConfig& config) {
  config.validate();
  if (!objective.evaluator) throw UsageError("objective has no evaluator");
  if (!(objective.lipschitz_f > 0.0)) throw UsageError("objective Lipschitz constant must be positive");
  for (const Cut& c : region.cuts)
    if (c.center.size() != region.dimension())
      throw UsageError("cut dimension does not match region dimension");
  return BranchAndBound(objective, region, config).run();
}

}  // namespace nic::oracle
