#include "nic/reform.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <sstream>

#include "nic/errors.hpp"

namespace nic::reform {

namespace {

constexpr std::size_t kMaxBinaries = 24;

std::vector<std::size_t> active_coords(std::size_t n, const std::vector<bool>& mask) {
  if (!mask.empty() && mask.size() != n) throw UsageError("cut mask length does not match center");
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < n; ++j)
    if (mask.empty() || mask[j]) out.push_back(j);
  if (out.empty()) throw UsageError("cut mask selects no coordinate");
  return out;
}

std::string idx(const char* base, std::size_t i) { return base + std::to_string(i); }

ReformSystem absolute_value_block(std::span<const double> center, double radius, double big_M,
                                  const std::vector<bool>& mask, NormKind norm) {
  if (center.empty()) throw UsageError("cut center must not be empty");
  if (!(radius > 0.0)) throw UsageError("reformulated cut radius must be positive");
  if (!(big_M > 0.0)) throw UsageError("big-M must be positive");
  ReformSystem sys;
  sys.norm = norm;
  sys.center.assign(center.begin(), center.end());
  sys.radius = radius;
  sys.big_M = big_M;
  sys.coords = active_coords(center.size(), mask);

  const double m = big_M;
  for (std::size_t i = 1; i <= sys.coords.size(); ++i) {
    const std::size_t j = sys.coords[i - 1];
    const std::string x = idx("x", j + 1);
    const std::string y = idx("y", i);
    const std::string z = idx("z", i);
    const double a = center[j];
    sys.given_vars.push_back(x);
    sys.continuous_vars.push_back(y);
    sys.binary_vars.push_back(z);
    // y >= (x - a) - M z ; y <= (x - a) + M z
    sys.constraints.push_back({"pa", i, {{y, 1.0}, {x, -1.0}, {z, m}}, Sense::Ge, -a});
    sys.constraints.push_back({"pb", i, {{y, 1.0}, {x, -1.0}, {z, -m}}, Sense::Le, -a});
    // y >= -(x - a) - M (1 - z) ; y <= -(x - a) + M (1 - z)
    sys.constraints.push_back({"na", i, {{y, 1.0}, {x, 1.0}, {z, -m}}, Sense::Ge, a - m});
    sys.constraints.push_back({"nb", i, {{y, 1.0}, {x, 1.0}, {z, m}}, Sense::Le, a + m});
    sys.constraints.push_back({"nn", i, {{y, 1.0}}, Sense::Ge, 0.0});
  }
  return sys;
}

// Phase-1 simplex with Bland's rule on free variables. rows[r] holds
// coefficients for `cols` variables.
bool lp_feasible(const std::vector<std::vector<double>>& rows, const std::vector<Sense>& senses,
                 const std::vector<double>& rhs, std::size_t cols) {
  const std::size_t r_count = rows.size();
  if (r_count == 0) return true;
  std::size_t slack_count = 0;
  for (Sense s : senses)
    if (s != Sense::Eq) ++slack_count;
  // columns: v+ (cols), v- (cols), slacks, artificials
  const std::size_t total = 2 * cols + slack_count + r_count;
  std::vector<std::vector<double>> t(r_count, std::vector<double>(total + 1, 0.0));
  std::vector<std::size_t> basis(r_count);
  double scale = 1.0;
  std::size_t slack = 0;
  for (std::size_t r = 0; r < r_count; ++r) {
    auto& row = t[r];
    for (std::size_t c = 0; c < cols; ++c) {
      row[c] = rows[r][c];
      row[cols + c] = -rows[r][c];
    }
    if (senses[r] == Sense::Le) row[2 * cols + slack++] = 1.0;
    if (senses[r] == Sense::Ge) row[2 * cols + slack++] = -1.0;
    row[total] = rhs[r];
    if (row[total] < 0.0)
      for (double& v : row) v = -v;
    const std::size_t art = 2 * cols + slack_count + r;
    row[art] = 1.0;
    basis[r] = art;
    scale = std::max(scale, std::abs(rhs[r]));
  }
  const double eps = 1e-12 * scale;
  // reduced costs of phase-1 objective sum(artificials)
  std::vector<double> obj(total + 1, 0.0);
  for (std::size_t r = 0; r < r_count; ++r)
    for (std::size_t c = 0; c <= total; ++c) obj[c] -= t[r][c];
  for (std::size_t r = 0; r < r_count; ++r) obj[2 * cols + slack_count + r] = 0.0;

  for (int iter = 0; iter < 10000; ++iter) {
    std::size_t enter = total;
    for (std::size_t c = 0; c < total; ++c)
      if (obj[c] < -eps) {
        enter = c;
        break;
      }
    if (enter == total) break;
    std::size_t leave = r_count;
    double best_ratio = 0.0;
    for (std::size_t r = 0; r < r_count; ++r) {
      if (t[r][enter] <= eps) continue;
      const double ratio = t[r][total] / t[r][enter];
      if (leave == r_count || ratio < best_ratio - eps ||
          (std::abs(ratio - best_ratio) <= eps && basis[r] < basis[leave])) {
        leave = r;
        best_ratio = ratio;
      }
    }
    if (leave == r_count) break;  // unbounded direction cannot lower phase-1 below 0
    const double piv = t[leave][enter];
    for (double& v : t[leave]) v /= piv;
    for (std::size_t r = 0; r < r_count; ++r) {
      if (r == leave) continue;
      const double f = t[r][enter];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= total; ++c) t[r][c] -= f * t[leave][c];
    }
    const double f = obj[enter];
    for (std::size_t c = 0; c <= total; ++c) obj[c] -= f * t[leave][c];
    basis[leave] = enter;
  }
  // obj[total] holds -(sum of artificials)
  return -obj[total] <= 1e-9 * scale;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_terms(std::ostream& out, const std::vector<Term>& terms) {
  bool first = true;
  for (const Term& t : terms) {
    if (first) {
      out << (t.coef < 0 ? " -" : "") << ' ' << fmt(std::abs(t.coef)) << ' ' << t.var;
      first = false;
    } else {
      out << (t.coef < 0 ? " - " : " + ") << fmt(std::abs(t.coef)) << ' ' << t.var;
    }
  }
}

const char* sense_text(Sense s) {
  switch (s) {
    case Sense::Le: return "<=";
    case Sense::Ge: return ">=";
    case Sense::Eq: return "=";
  }
  return "?";
}

}  // namespace

ReformSystem reformulate_1norm(std::span<const double> center, double radius, double big_M,
                               const std::vector<bool>& mask) {
  ReformSystem sys = absolute_value_block(center, radius, big_M, mask, NormKind::One);
  LinearRow sum{"sum", 0, {}, Sense::Ge, radius};
  for (const auto& y : sys.continuous_vars) sum.terms.push_back({y, 1.0});
  sys.constraints.insert(sys.constraints.begin(), std::move(sum));
  return sys;
}

ReformSystem reformulate_infnorm(std::span<const double> center, double radius, double big_M,
                                 const std::vector<bool>& mask) {
  ReformSystem sys = absolute_value_block(center, radius, big_M, mask, NormKind::Inf);
  const std::size_t k = sys.coords.size();
  const double m = big_M;
  std::vector<std::string> w(k), u(k);
  for (std::size_t i = 1; i <= k; ++i) {
    w[i - 1] = idx("w", i);
    u[i - 1] = idx("u", i);
    sys.continuous_vars.push_back(w[i - 1]);
    sys.binary_vars.push_back(u[i - 1]);
  }
  std::vector<LinearRow> rows;
  LinearRow wsum{"wsum", 0, {}, Sense::Ge, radius};
  LinearRow usum{"usum", 0, {}, Sense::Eq, 1.0};
  for (std::size_t i = 0; i < k; ++i) {
    wsum.terms.push_back({w[i], 1.0});
    usum.terms.push_back({u[i], 1.0});
  }
  rows.push_back(wsum);
  for (std::size_t i = 1; i <= k; ++i) {
    const std::string& wi = w[i - 1];
    const std::string& ui = u[i - 1];
    const std::string yi = idx("y", i);
    // w <= y + M (1 - u)
    rows.push_back({"wy", i, {{wi, 1.0}, {yi, -1.0}, {ui, m}}, Sense::Le, m});
    rows.push_back({"wnn", i, {{wi, 1.0}}, Sense::Ge, 0.0});
    // w <= M u
    rows.push_back({"wm", i, {{wi, 1.0}, {ui, -m}}, Sense::Le, 0.0});
  }
  rows.push_back(usum);
  for (std::size_t i = 1; i <= k; ++i) {
    // sum w >= y_i
    LinearRow mx{"max", i, wsum.terms, Sense::Ge, 0.0};
    mx.terms.push_back({idx("y", i), -1.0});
    rows.push_back(std::move(mx));
  }
  sys.constraints.insert(sys.constraints.begin(), rows.begin(), rows.end());
  return sys;
}

double default_big_M(const BoxDomain& box, NormKind norm) {
  return norm_eval(norm, box.widths());
}

bool verify_by_enumeration(const ReformSystem& system, std::span<const double> x) {
  if (x.size() != system.center.size()) throw UsageError("point dimension does not match the cut");
  const std::size_t nb = system.binary_vars.size();
  if (nb > kMaxBinaries) throw UsageError("too many binaries to enumerate");

  std::map<std::string, double> given;
  for (std::size_t i = 0; i < system.coords.size(); ++i)
    given[system.given_vars[i]] = x[system.coords[i]];
  std::map<std::string, std::size_t> binary_pos, cont_pos;
  for (std::size_t i = 0; i < nb; ++i) binary_pos[system.binary_vars[i]] = i;
  for (std::size_t i = 0; i < system.continuous_vars.size(); ++i)
    cont_pos[system.continuous_vars[i]] = i;

  const std::size_t cols = system.continuous_vars.size();
  std::vector<std::vector<double>> rows(system.constraints.size(), std::vector<double>(cols));
  std::vector<Sense> senses(system.constraints.size());
  std::vector<double> rhs(system.constraints.size());

  for (std::uint64_t assign = 0; assign < (std::uint64_t{1} << nb); ++assign) {
    for (std::size_t r = 0; r < system.constraints.size(); ++r) {
      const LinearRow& row = system.constraints[r];
      std::fill(rows[r].begin(), rows[r].end(), 0.0);
      double b = row.rhs;
      for (const Term& t : row.terms) {
        if (auto it = given.find(t.var); it != given.end()) {
          b -= t.coef * it->second;
        } else if (auto bit = binary_pos.find(t.var); bit != binary_pos.end()) {
          b -= t.coef * static_cast<double>((assign >> bit->second) & 1U);
        } else if (auto cit = cont_pos.find(t.var); cit != cont_pos.end()) {
          rows[r][cit->second] += t.coef;
        } else {
          throw UsageError("row " + row.name() + " references unknown variable " + t.var);
        }
      }
      senses[r] = row.sense;
      rhs[r] = b;
    }
    if (lp_feasible(rows, senses, rhs, cols)) return true;
  }
  return false;
}

std::string export_lp(std::span<const ReformSystem> systems, std::span<const double> objective,
                      const BoxDomain& box, std::span<const QuadraticCut> quadratic) {
  const std::size_t n = box.dimension();
  if (objective.size() != n) throw UsageError("objective length does not match box dimension");
  for (const auto& s : systems)
    if (s.center.size() != n) throw UsageError("cut dimension does not match box dimension");
  for (const auto& q : quadratic)
    if (q.center.size() != n) throw UsageError("quadratic cut dimension does not match box");

  auto rename = [](std::size_t k, const std::string& v) {
    return v.front() == 'x' ? v : "c" + std::to_string(k) + "_" + v;
  };

  std::ostringstream out;
  out << "\\ norm-induced cuts: " << systems.size() << " mixed-binary, " << quadratic.size()
      << " quadratic\n";
  out << "Minimize\n obj:";
  std::vector<Term> obj;
  for (std::size_t j = 0; j < n; ++j)
    if (objective[j] != 0.0) obj.push_back({"x" + std::to_string(j + 1), objective[j]});
  if (obj.empty()) obj.push_back({"x1", 0.0});
  write_terms(out, obj);
  out << "\nSubject To\n";
  for (std::size_t k = 0; k < systems.size(); ++k) {
    for (const LinearRow& row : systems[k].constraints) {
      std::vector<Term> terms;
      for (const Term& t : row.terms) terms.push_back({rename(k, t.var), t.coef});
      out << " cut" << k << '_' << row.name() << ':';
      write_terms(out, terms);
      out << ' ' << sense_text(row.sense) << ' ' << fmt(row.rhs) << '\n';
    }
  }
  for (std::size_t k = 0; k < quadratic.size(); ++k) {
    const QuadraticCut& q = quadratic[k];
    // sum (x_j - a_j)^2 >= b^2  <=>  sum x_j^2 - 2 a_j x_j >= b^2 - sum a_j^2
    double rhs = q.radius * q.radius;
    std::vector<Term> lin;
    std::vector<std::size_t> sq;
    for (std::size_t j = 0; j < n; ++j) {
      if (!q.mask.empty() && !q.mask[j]) continue;
      rhs -= q.center[j] * q.center[j];
      if (q.center[j] != 0.0) lin.push_back({"x" + std::to_string(j + 1), -2.0 * q.center[j]});
      sq.push_back(j);
    }
    out << " cutq" << k << ':';
    if (!lin.empty()) write_terms(out, lin);
    out << (lin.empty() ? " [" : " + [");
    for (std::size_t i = 0; i < sq.size(); ++i)
      out << (i ? " + " : " ") << "x" << sq[i] + 1 << " ^2";
    out << " ] >= " << fmt(rhs) << '\n';
  }
  out << "Bounds\n";
  for (std::size_t j = 0; j < n; ++j)
    out << ' ' << fmt(box.lower()[j]) << " <= x" << j + 1 << " <= " << fmt(box.upper()[j]) << '\n';
  if (box.any_integral()) {
    out << "Generals\n";
    for (std::size_t j = 0; j < n; ++j)
      if (box.is_integral(j)) out << " x" << j + 1 << '\n';
  }
  bool any_binary = false;
  for (const auto& s : systems) any_binary = any_binary || !s.binary_vars.empty();
  if (any_binary) {
    out << "Binaries\n";
    for (std::size_t k = 0; k < systems.size(); ++k)
      for (const auto& b : systems[k].binary_vars) out << ' ' << rename(k, b) << '\n';
  }
  out << "End\n";
  return out.str();
}

}  // namespace nic::reform
