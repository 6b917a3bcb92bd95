#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>

#include "nic/core.hpp"

namespace nic::oracle {

enum class Status { Infeasible, Solved };

struct OracleResult {
  Status status = Status::Infeasible;
  Point point;
  double value = std::numeric_limits<double>::infinity();
  /// Upper bound on value - true minimum; +inf for local solutions.
  double gap = std::numeric_limits<double>::infinity();
  std::size_t nodes = 0;
};

struct OracleConfig {
  double tolerance = 1e-6;         // absolute optimality gap
  std::size_t node_limit = 10'000'000;
  double box_min_width = 1e-10;

  void validate() const;
};

/// Solves min f over a relaxed region. Implementations may keep scratch state
/// between calls but must not depend on previous results.
class Oracle {
 public:
  virtual ~Oracle() = default;
  /// `hint` is a starting point for local methods; global methods ignore it.
  virtual OracleResult solve(const ObjectiveSpec& objective, const RelaxedRegion& region,
                             std::span<const double> hint) = 0;
  [[nodiscard]] virtual bool is_global() const = 0;
  [[nodiscard]] virtual std::string name() const = 0;
};

/// Largest masked distance from the cut center to any point of [lower, upper].
double max_distance_to_box(const Cut& cut, std::span<const double> lower,
                           std::span<const double> upper);
/// Smallest masked distance from the cut center to [lower, upper].
double min_distance_to_box(const Cut& cut, std::span<const double> lower,
                           std::span<const double> upper);

/// Lipschitz branch-and-bound. Sub-box lower bound f(c) - L_f * rho where rho
/// is the largest distance from the evaluated point c to the sub-box in
/// objective.norm. Sub-boxes lying strictly inside one cut ball are discarded.
///
/// Returns Infeasible only once every sub-box has been discarded. Throws
/// ResourceError when the node budget runs out or sub-boxes shrink below
/// box_min_width before the gap closes.
OracleResult solve_global(const ObjectiveSpec& objective, const RelaxedRegion& region,
                          const OracleConfig& config = {});

/// Compass search from `start`. An infeasible start is first pushed out of
/// the violated cut balls. The result carries gap = +inf.
/// Throws InfeasibleStartError if no region point can be reached that way.
OracleResult solve_local(const ObjectiveSpec& objective, const RelaxedRegion& region,
                         std::span<const double> start, const OracleConfig& config = {});

class GlobalOracle final : public Oracle {
 public:
  explicit GlobalOracle(OracleConfig config = {}) : config_(config) { config_.validate(); }
  OracleResult solve(const ObjectiveSpec& objective, const RelaxedRegion& region,
                     std::span<const double> /*hint*/) override {
    return solve_global(objective, region, config_);
  }
  [[nodiscard]] bool is_global() const override { return true; }
  [[nodiscard]] std::string name() const override { return "global"; }
  [[nodiscard]] const OracleConfig& config() const noexcept { return config_; }

 private:
  OracleConfig config_;
};

class LocalOracle final : public Oracle {
 public:
  explicit LocalOracle(OracleConfig config = {}) : config_(config) { config_.validate(); }
  OracleResult solve(const ObjectiveSpec& objective, const RelaxedRegion& region,
                     std::span<const double> hint) override;
  [[nodiscard]] bool is_global() const override { return false; }
  [[nodiscard]] std::string name() const override { return "local"; }

 private:
  OracleConfig config_;
};

}  // namespace nic::oracle
