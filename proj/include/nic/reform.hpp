#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "nic/core.hpp"

namespace nic::reform {

enum class Sense { Le, Ge, Eq };

struct Term {
  std::string var;
  double coef = 0.0;
};

/// sum(terms) <sense> rhs. `tag` and `index` (1-based, 0 = none) name the row.
struct LinearRow {
  std::string tag;
  std::size_t index = 0;
  std::vector<Term> terms;
  Sense sense = Sense::Ge;
  double rhs = 0.0;

  [[nodiscard]] std::string name() const {
    return index == 0 ? tag : tag + std::to_string(index);
  }
};

/// Mixed-binary linear encoding of one cut ||x - a||_p >= b for p in {1, inf}.
/// Given variables are x<j> (1-based, j ranging over the cut's coordinates);
/// the encoding adds y_i, z_i and, for p = inf, w_i, u_i.
struct ReformSystem {
  NormKind norm = NormKind::One;
  Point center;
  double radius = 0.0;
  double big_M = 0.0;
  /// 0-based coordinates of x the cut acts on.
  std::vector<std::size_t> coords;
  std::vector<std::string> given_vars;
  std::vector<std::string> continuous_vars;
  std::vector<std::string> binary_vars;
  std::vector<LinearRow> constraints;
};

/// sum y >= b with y_i = |x_i - a_i| enforced by four big-M rows and y >= 0:
/// 5n + 1 rows, n continuous and n binary variables.
ReformSystem reformulate_1norm(std::span<const double> center, double radius, double big_M,
                               const std::vector<bool>& mask = {});

/// The y/z block plus sum w >= b, w_i <= y_i + M(1 - u_i), 0 <= w_i <= M u_i,
/// sum u = 1 and sum w >= y_i: 9n + 2 rows.
ReformSystem reformulate_infnorm(std::span<const double> center, double radius, double big_M,
                                 const std::vector<bool>& mask = {});

/// Diameter of the box in `norm`.
double default_big_M(const BoxDomain& box, NormKind norm);

/// Whether some assignment of the binaries admits continuous values meeting
/// every row with x fixed. Each assignment is checked with an exact phase-1
/// simplex. Throws UsageError beyond 24 binaries.
bool verify_by_enumeration(const ReformSystem& system, std::span<const double> x);

/// A Euclidean cut emitted as the quadratic row ||x - a||^2 >= b^2.
struct QuadraticCut {
  Point center;
  double radius = 0.0;
  std::vector<bool> mask;
};

/// CPLEX-LP text: Minimize / Subject To / Bounds / [Generals] / Binaries / End.
/// Auxiliary variables of system k are prefixed "c<k>_" and its rows are named
/// cut<k>_<tag><i>. Quadratic cuts follow as cutq<k>.
std::string export_lp(std::span<const ReformSystem> systems, std::span<const double> objective,
                      const BoxDomain& box, std::span<const QuadraticCut> quadratic = {});

}  // namespace nic::reform
