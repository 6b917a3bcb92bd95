#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nic/core.hpp"
#include "nic/driver.hpp"
#include "nic/expr.hpp"
#include "nic/lipschitz.hpp"

namespace nic::io {

struct ConstraintEntry {
  std::string expr;
  std::optional<double> L;
  /// 1-based coordinates the constraint depends on; empty = all.
  std::vector<std::size_t> mask;
};

/// Problem description as stored on disk (JSON object with the keys below).
struct ProblemFile {
  std::string name;
  std::size_t dimension = 0;
  std::vector<std::pair<double, double>> bounds;
  std::vector<bool> integral;
  NormKind norm = NormKind::Two;
  NormKind image_norm = NormKind::Two;
  std::string objective;
  std::optional<double> objective_L;
  std::vector<ConstraintEntry> constraints;
  std::optional<double> global_L;
  std::optional<double> epsilon;
  std::optional<std::size_t> max_iterations;
  std::optional<CutMode> cut_mode;
};

/// Keys: dimension, bounds, integral, norm, image_norm, objective,
/// objective_L, constraints [{expr, L, mask}], global_L, epsilon,
/// max_iterations, cut_mode. Unknown keys are rejected. Throws ConfigError.
ProblemFile parse_problem(std::string_view json_text);
ProblemFile load_problem(const std::filesystem::path& path);
std::string to_json(const ProblemFile& file);

/// sin-example, bad-local, comp-example, comp-example-manipulated,
/// infeasible-1d. Every Lipschitz constant is fixed.
const std::vector<ProblemFile>& builtin_problems();
/// Throws UsageError for unknown names.
const ProblemFile& builtin(std::string_view name);

enum class EstimateMethod { Grid, Sampling };

struct EstimateOptions {
  EstimateMethod method = EstimateMethod::Grid;
  std::size_t grid_per_dim = 64;
  /// Lattices are shrunk so grid_per_dim^n stays below this.
  std::size_t max_grid_points = 1'000'000;
  double safety = 1.05;
  std::size_t pairs = 10'000;
  double inflation = 0.1;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// One Lipschitz constant that had to be filled in.
struct EstimateNote {
  std::string target;  // "objective_L", "global_L" or "L[<q>]" (1-based)
  lipschitz::LipschitzEstimate estimate;
};

struct Instantiated {
  Problem problem;
  std::vector<expr::Expr> constraint_exprs;
  expr::Expr objective_expr;
  std::vector<EstimateNote> estimates;

  [[nodiscard]] bool any_heuristic() const;
};

/// Parses every expression and fills in missing constants. Per-component
/// constants are estimated only when some are given or the file asks for
/// component mode; otherwise component_L stays unset unless all are given.
Instantiated instantiate(const ProblemFile& file, const EstimateOptions& options = {});

/// Coefficients c with f(x) = f(center) + c . (x - center) on the box, when
/// the objective is affine (checked at sample points); nullopt otherwise.
std::optional<Point> linear_objective(const Instantiated& inst);

}  // namespace nic::io
