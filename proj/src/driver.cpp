#include "nic/driver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "nic/bounds.hpp"
#include "nic/errors.hpp"

namespace nic {

CutMode parse_cut_mode(std::string_view text) {
  if (text == "vector") return CutMode::Vector;
  if (text == "component") return CutMode::Component;
  throw UsageError("unknown cut mode '" + std::string(text) + "' (expected vector or component)");
}

std::string to_string(CutMode mode) {
  return mode == CutMode::Vector ? "vector" : "component";
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::InfeasibleCertified: return "infeasible";
    case SolveStatus::Solved: return "solved";
    case SolveStatus::IterationLimit: return "iteration-limit";
  }
  return "?";
}

void DriverConfig::validate(const Problem& problem) const {
  if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be nonnegative");
  if (max_iterations == 0) throw ConfigError("max_iterations must be positive");
  if (epsilon_floor && !(epsilon > 0.0))
    throw ConfigError("the epsilon radius floor requires epsilon > 0");
  if (cut_mode == CutMode::Component && !problem.constraints.component_L)
    throw ConfigError("component cut mode needs per-component Lipschitz constants");
  if (use_pointwise_L) {
    if (!problem.constraints.pointwise_L)
      throw ConfigError("pointwise Lipschitz mode needs a pointwise_L evaluator");
    if (cut_mode == CutMode::Component)
      throw ConfigError("pointwise Lipschitz constants apply to vector cuts only");
  }
  if (!start.empty() && start.size() != problem.domain.dimension())
    throw ConfigError("start point dimension does not match the problem");
}

namespace {

std::vector<bool> vector_mask(const ConstraintSpec& cs, std::size_t n) {
  if (cs.active_masks.empty()) return {};
  std::vector<bool> mask(n, false);
  for (const auto& m : cs.active_masks) {
    if (m.empty()) return {};
    for (std::size_t j = 0; j < n; ++j) mask[j] = mask[j] || m[j];
  }
  return mask;
}

}  // namespace

SolveOutcome run(const Problem& problem, oracle::Oracle& oracle, const DriverConfig& config) {
  problem.validate();
  config.validate(problem);
  const ConstraintSpec& cs = problem.constraints;
  const std::size_t n = problem.domain.dimension();
  const std::vector<bool> full_mask = vector_mask(cs, n);

  SolveOutcome out;
  out.region.domain = problem.domain;
  Point hint = config.start;

  for (std::size_t k = 0; k < config.max_iterations; ++k) {
    oracle::OracleResult sol;
    try {
      sol = oracle.solve(problem.objective, out.region, hint);
    } catch (const std::exception& e) {
      throw RunAborted(std::string("oracle failed in iteration ") + std::to_string(k) + ": " +
                           e.what(),
                       out);
    }
    if (sol.status == oracle::Status::Infeasible) {
      out.status = SolveStatus::InfeasibleCertified;
      out.lower_bound = std::numeric_limits<double>::infinity();
      return out;
    }

    IterationRecord rec;
    rec.k = k;
    rec.point = sol.point;
    rec.objective = sol.value;
    rec.oracle_nodes = sol.nodes;
    rec.oracle_gap = sol.gap;
    out.lower_bound = sol.value;

    const Point r = cs.evaluate(sol.point);
    rec.violation_max = *std::max_element(r.begin(), r.end());
    rec.violation_norm = norm_eval(cs.image_norm, positive_part(r));

    const double accept_tol = config.epsilon > 0.0 ? config.epsilon : kExactFeasibilityTol;
    if (rec.violation_max <= accept_tol) {
      rec.radius = 0.0;
      out.trace.push_back(std::move(rec));
      out.status = SolveStatus::Solved;
      out.final_point = sol.point;
      return out;
    }

    double radius = 0.0;
    std::vector<bool> mask = full_mask;
    if (config.cut_mode == CutMode::Vector) {
      double lip = cs.global_L;
      if (config.use_pointwise_L) {
        const double local = cs.pointwise_L(sol.point);
        if (!(local > 0.0))
          throw ConfigError("pointwise Lipschitz constant must be positive");
        if (local > cs.global_L * (1.0 + 1e-12))
          throw ConfigError("pointwise Lipschitz constant " + std::to_string(local) +
                            " exceeds the global constant " + std::to_string(cs.global_L));
        lip = local;
      }
      radius = rec.violation_norm / lip;
    } else {
      const auto& lp = *cs.component_L;
      for (std::size_t q = 0; q < r.size(); ++q) {
        if (r[q] <= 0.0) continue;
        const double cand = r[q] / lp[q];
        if (!rec.attaining_component || cand > radius) {
          radius = cand;
          rec.attaining_component = q;
        }
      }
      if (!cs.active_masks.empty()) mask = cs.active_masks[*rec.attaining_component];
    }
    if (config.epsilon_floor) radius = std::max(radius, config.epsilon);
    rec.radius = radius;

    out.region.cuts.push_back(make_cut(sol.point, radius, problem.domain_norm, mask));
    hint = sol.point;
    out.trace.push_back(std::move(rec));
  }
  out.status = SolveStatus::IterationLimit;
  return out;
}

std::vector<double> lower_bound_sequence(const std::vector<IterationRecord>& trace) {
  std::vector<double> seq;
  seq.reserve(trace.size());
  for (const auto& rec : trace) seq.push_back(rec.objective);
  return seq;
}

Problem normalized(const Problem& problem) {
  problem.validate();
  const double rho = bounds::box_radius(problem.domain, problem.domain_norm);
  if (!(rho > 0.0)) throw ConfigError("cannot normalize on a box with zero radius");
  const double scale = 1.0 / (rho * problem.constraints.global_L);

  Problem out = problem;
  ConstraintSpec& cs = out.constraints;
  for (auto& comp : cs.components) {
    comp = [inner = comp, scale](std::span<const double> x) { return scale * inner(x); };
  }
  cs.global_L = problem.constraints.global_L * scale;
  if (cs.component_L)
    for (double& l : *cs.component_L) l *= scale;
  if (cs.pointwise_L)
    cs.pointwise_L = [inner = cs.pointwise_L, scale](std::span<const double> x) {
      return scale * inner(x);
    };
  return out;
}

namespace {

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_field(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw UsageError("trailing characters in number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw UsageError("malformed number '" + s + "' in trace");
  }
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, ',')) fields.push_back(cur);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

void write_trace_csv(std::ostream& out, const std::vector<IterationRecord>& trace,
                     std::size_t dimension) {
  out << "k";
  for (std::size_t j = 1; j <= dimension; ++j) out << ",x" << j;
  out << ",f,viol_norm,viol_max,radius,component,oracle_nodes,oracle_gap\n";
  for (const auto& rec : trace) {
    if (rec.point.size() != dimension) throw UsageError("trace record dimension mismatch");
    out << rec.k;
    for (double v : rec.point) out << ',' << fmt(v);
    out << ',' << fmt(rec.objective) << ',' << fmt(rec.violation_norm) << ','
        << fmt(rec.violation_max) << ',' << fmt(rec.radius) << ',';
    if (rec.attaining_component) out << *rec.attaining_component + 1;
    out << ',' << rec.oracle_nodes << ',' << fmt(rec.oracle_gap) << '\n';
  }
}

std::vector<IterationRecord> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw UsageError("empty trace file");
  const auto header = split_csv(line);
  if (header.size() < 9 || header.front() != "k")
    throw UsageError("trace header does not look like a NIC trace");
  const std::size_t n = header.size() - 8;
  std::vector<IterationRecord> trace;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != header.size())
      throw UsageError("trace line " + std::to_string(line_no) + " has " +
                       std::to_string(f.size()) + " fields, expected " +
                       std::to_string(header.size()));
    IterationRecord rec;
    rec.k = static_cast<std::size_t>(parse_field(f[0]));
    rec.point.resize(n);
    for (std::size_t j = 0; j < n; ++j) rec.point[j] = parse_field(f[1 + j]);
    rec.objective = parse_field(f[n + 1]);
    rec.violation_norm = parse_field(f[n + 2]);
    rec.violation_max = parse_field(f[n + 3]);
    rec.radius = parse_field(f[n + 4]);
    if (!f[n + 5].empty())
      rec.attaining_component = static_cast<std::size_t>(parse_field(f[n + 5])) - 1;
    rec.oracle_nodes = static_cast<std::size_t>(parse_field(f[n + 6]));
    rec.oracle_gap = parse_field(f[n + 7]);
    trace.push_back(std::move(rec));
  }
  return trace;
}

}  // namespace nic
