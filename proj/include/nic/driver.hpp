#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nic/core.hpp"
#include "nic/oracle.hpp"

namespace nic {

enum class CutMode { Vector, Component };

CutMode parse_cut_mode(std::string_view text);
std::string to_string(CutMode mode);

/// Violations up to this size count as zero in exact mode.
inline constexpr double kExactFeasibilityTol = 1e-14;

struct DriverConfig {
  /// 0 = exact mode (accept only r <= 0); otherwise accept r_q <= epsilon.
  double epsilon = 0.0;
  std::size_t max_iterations = 1000;
  CutMode cut_mode = CutMode::Vector;
  /// Radius max(||r_+||/L, epsilon). Only meaningful with epsilon > 0.
  bool epsilon_floor = false;
  bool use_pointwise_L = false;
  /// Start for the first local-oracle call; later calls start at the previous
  /// iterate. Ignored by global oracles.
  Point start;

  /// epsilon-approximate mode with the radius floor switched on.
  static DriverConfig approximate(double epsilon, std::size_t max_iterations = 1000) {
    DriverConfig c;
    c.epsilon = epsilon;
    c.epsilon_floor = epsilon > 0.0;
    c.max_iterations = max_iterations;
    return c;
  }

  void validate(const Problem& problem) const;
};

struct IterationRecord {
  std::size_t k = 0;
  Point point;
  double objective = 0.0;
  double violation_norm = 0.0;  // ||r(x)_+|| in the image norm
  double violation_max = 0.0;   // max_q r_q(x)
  double radius = 0.0;          // 0 iff the iterate was accepted
  std::optional<std::size_t> attaining_component;  // 0-based
  std::size_t oracle_nodes = 0;
  double oracle_gap = 0.0;
};

enum class SolveStatus { InfeasibleCertified, Solved, IterationLimit };

std::string to_string(SolveStatus status);

struct SolveOutcome {
  SolveStatus status = SolveStatus::IterationLimit;
  std::vector<IterationRecord> trace;
  std::optional<Point> final_point;
  /// Last oracle value. With a global oracle this bounds the optimum from
  /// below; +inf once infeasibility is certified.
  double lower_bound = 0.0;
  /// Box plus every cut added during the run.
  RelaxedRegion region;
};

/// An oracle failure in the middle of a run. Keeps what was done so far.
class RunAborted : public std::runtime_error {
 public:
  RunAborted(const std::string& what, SolveOutcome partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  [[nodiscard]] const SolveOutcome& partial() const noexcept { return partial_; }

 private:
  SolveOutcome partial_;
};

/// The norm-induced cutting loop: solve the relaxation, stop if infeasible or
/// if the minimizer satisfies the constraints, otherwise exclude a ball around
/// it and repeat.
SolveOutcome run(const Problem& problem, oracle::Oracle& oracle, const DriverConfig& config);

/// Objective value of every iterate.
std::vector<double> lower_bound_sequence(const std::vector<IterationRecord>& trace);

/// Copy of `problem` with r scaled by 1 / (rho(Omega) L) and the Lipschitz
/// constants adjusted to match. Cut radii are unchanged; only the meaning of
/// epsilon changes.
Problem normalized(const Problem& problem);

/// CSV with header k,x1..xn,f,viol_norm,viol_max,radius,component,oracle_nodes,oracle_gap.
/// Component is 1-based and empty when not applicable. 17 significant digits.
void write_trace_csv(std::ostream& out, const std::vector<IterationRecord>& trace,
                     std::size_t dimension);

/// Reads back what write_trace_csv produced. Throws UsageError on malformed input.
std::vector<IterationRecord> read_trace_csv(std::istream& in);

}  // namespace nic
