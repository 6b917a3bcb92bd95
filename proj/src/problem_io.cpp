#include "nic/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "nic/errors.hpp"

namespace nic::io {

using nlohmann::json;

namespace {

double positive_real(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("'" + key + "' must be a number");
  const double d = v.get<double>();
  if (!(d > 0.0) || !std::isfinite(d)) throw ConfigError("'" + key + "' must be positive");
  return d;
}

NormKind norm_value(const json& v, const std::string& key) {
  try {
    if (v.is_number_integer()) return parse_norm(std::to_string(v.get<long>()));
    if (v.is_string()) return parse_norm(v.get<std::string>());
  } catch (const UsageError&) {
  }
  throw ConfigError("'" + key + "' must be one of \"1\", \"2\", \"inf\"");
}

std::string norm_text(NormKind n) { return to_string(n); }

}  // namespace

ProblemFile parse_problem(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("problem file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("problem file must be a JSON object");

  static const std::set<std::string> known = {
      "name",       "dimension",  "bounds",   "integral",       "norm",    "image_norm",
      "objective",  "objective_L", "constraints", "global_L",   "epsilon", "max_iterations",
      "cut_mode"};
  for (const auto& [key, _] : doc.items())
    if (!known.count(key)) throw ConfigError("unknown key '" + key + "' in problem file");
  for (const char* key : {"dimension", "bounds", "objective", "constraints"})
    if (!doc.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");

  ProblemFile f;
  if (doc.contains("name")) f.name = doc["name"].get<std::string>();
  if (!doc["dimension"].is_number_integer() || doc["dimension"].get<long>() < 1)
    throw ConfigError("'dimension' must be a positive integer");
  f.dimension = doc["dimension"].get<std::size_t>();

  const json& b = doc["bounds"];
  if (!b.is_array() || b.size() != f.dimension)
    throw ConfigError("'bounds' must list one [lo, hi] pair per dimension");
  for (const auto& pair : b) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number())
      throw ConfigError("each bounds entry must be [lo, hi]");
    f.bounds.emplace_back(pair[0].get<double>(), pair[1].get<double>());
  }
  if (doc.contains("integral")) {
    const json& in = doc["integral"];
    if (!in.is_array() || in.size() != f.dimension)
      throw ConfigError("'integral' must have one boolean per dimension");
    for (const auto& v : in) {
      if (!v.is_boolean()) throw ConfigError("'integral' entries must be booleans");
      f.integral.push_back(v.get<bool>());
    }
  }
  if (doc.contains("norm")) f.norm = norm_value(doc["norm"], "norm");
  if (doc.contains("image_norm")) f.image_norm = norm_value(doc["image_norm"], "image_norm");
  if (!doc["objective"].is_string()) throw ConfigError("'objective' must be a string");
  f.objective = doc["objective"].get<std::string>();
  if (doc.contains("objective_L")) f.objective_L = positive_real(doc["objective_L"], "objective_L");

  const json& cons = doc["constraints"];
  if (!cons.is_array() || cons.empty())
    throw ConfigError("'constraints' must be a non-empty list");
  for (const auto& c : cons) {
    if (!c.is_object() || !c.contains("expr") || !c["expr"].is_string())
      throw ConfigError("each constraint needs an 'expr' string");
    ConstraintEntry e;
    e.expr = c["expr"].get<std::string>();
    for (const auto& [key, _] : c.items())
      if (key != "expr" && key != "L" && key != "mask")
        throw ConfigError("unknown constraint key '" + key + "'");
    if (c.contains("L")) e.L = positive_real(c["L"], "L");
    if (c.contains("mask")) {
      if (!c["mask"].is_array()) throw ConfigError("'mask' must be a list of indices");
      for (const auto& v : c["mask"]) {
        if (!v.is_number_integer()) throw ConfigError("'mask' entries must be integers");
        const long j = v.get<long>();
        if (j < 1 || static_cast<std::size_t>(j) > f.dimension)
          throw ConfigError("mask index " + std::to_string(j) + " out of range");
        e.mask.push_back(static_cast<std::size_t>(j));
      }
    }
    f.constraints.push_back(std::move(e));
  }
  if (doc.contains("global_L")) f.global_L = positive_real(doc["global_L"], "global_L");
  if (doc.contains("epsilon")) {
    if (!doc["epsilon"].is_number() || doc["epsilon"].get<double>() < 0.0)
      throw ConfigError("'epsilon' must be a nonnegative number");
    f.epsilon = doc["epsilon"].get<double>();
  }
  if (doc.contains("max_iterations")) {
    if (!doc["max_iterations"].is_number_integer() || doc["max_iterations"].get<long>() < 1)
      throw ConfigError("'max_iterations' must be a positive integer");
    f.max_iterations = doc["max_iterations"].get<std::size_t>();
  }
  if (doc.contains("cut_mode")) {
    try {
      f.cut_mode = parse_cut_mode(doc["cut_mode"].get<std::string>());
    } catch (const std::exception&) {
      throw ConfigError("'cut_mode' must be \"vector\" or \"component\"");
    }
  }
  return f;
}

ProblemFile load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open problem file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  ProblemFile f = parse_problem(ss.str());
  if (f.name.empty()) f.name = path.stem().string();
  return f;
}

std::string to_json(const ProblemFile& f) {
  json doc;
  doc["name"] = f.name;
  doc["dimension"] = f.dimension;
  doc["bounds"] = json::array();
  for (const auto& [lo, hi] : f.bounds) doc["bounds"].push_back({lo, hi});
  if (!f.integral.empty()) doc["integral"] = f.integral;
  doc["norm"] = norm_text(f.norm);
  doc["image_norm"] = norm_text(f.image_norm);
  doc["objective"] = f.objective;
  if (f.objective_L) doc["objective_L"] = *f.objective_L;
  doc["constraints"] = json::array();
  for (const auto& c : f.constraints) {
    json e;
    e["expr"] = c.expr;
    if (c.L) e["L"] = *c.L;
    if (!c.mask.empty()) e["mask"] = c.mask;
    doc["constraints"].push_back(e);
  }
  if (f.global_L) doc["global_L"] = *f.global_L;
  if (f.epsilon) doc["epsilon"] = *f.epsilon;
  if (f.max_iterations) doc["max_iterations"] = *f.max_iterations;
  if (f.cut_mode) doc["cut_mode"] = to_string(*f.cut_mode);
  return doc.dump(2) + "\n";
}

const std::vector<ProblemFile>& builtin_problems() {
  static const std::vector<ProblemFile> catalog = [] {
    std::vector<ProblemFile> v;

    ProblemFile sin;
    sin.name = "sin-example";
    sin.dimension = 2;
    sin.bounds = {{-1.0, 1.0}, {-1.0, 1.0}};
    sin.objective = "abs(x1 - x2) + x1";
    sin.objective_L = std::sqrt(5.0);
    sin.constraints = {{"-sin(x1) - x2", std::sqrt(2.0), {}}};
    sin.global_L = std::sqrt(2.0);
    sin.epsilon = 1e-4;
    v.push_back(sin);

    ProblemFile bad;
    bad.name = "bad-local";
    bad.dimension = 1;
    bad.bounds = {{-1.0, 1.0}};
    bad.objective = "-abs(x1)";
    bad.objective_L = 1.0;
    bad.constraints = {{"-x1^3/3", 1.0, {}}};
    bad.global_L = 1.0;
    bad.epsilon = 0.0;
    v.push_back(bad);

    ProblemFile comp;
    comp.name = "comp-example";
    comp.dimension = 2;
    comp.bounds = {{1.0, 10.0}, {0.0, 4.0}};
    comp.objective = "x1 + 4*x2";
    comp.objective_L = std::sqrt(17.0);
    comp.constraints = {{"cos(6*x1)/2 - x2 + 1.8", std::sqrt(10.0), {}},
                        {"-2*sin(4*x1)/sqrt(x1) + x2 - 2", std::sqrt(42.83), {}}};
    comp.global_L = std::sqrt(50.83);
    comp.max_iterations = 100;
    v.push_back(comp);

    ProblemFile manip = comp;
    manip.name = "comp-example-manipulated";
    manip.constraints = {{"cos(6*x1)/2 - x2 + 1.8", std::sqrt(15.0), {}},
                         {"cos(6*x1)/2 - x2 + 1.8", std::sqrt(15.0), {}}};
    manip.global_L = std::sqrt(20.0);
    v.push_back(manip);

    ProblemFile inf;
    inf.name = "infeasible-1d";
    inf.dimension = 1;
    inf.bounds = {{-1.0, 1.0}};
    inf.objective = "x1";
    inf.objective_L = 1.0;
    inf.constraints = {{"x1^2 + 1", 2.0, {}}};
    inf.global_L = 2.0;
    inf.epsilon = 0.0;
    v.push_back(inf);
    return v;
  }();
  return catalog;
}

const ProblemFile& builtin(std::string_view name) {
  for (const auto& p : builtin_problems())
    if (p.name == name) return p;
  std::string names;
  for (const auto& p : builtin_problems()) names += (names.empty() ? "" : ", ") + p.name;
  throw UsageError("unknown builtin '" + std::string(name) + "' (available: " + names + ")");
}

bool Instantiated::any_heuristic() const {
  for (const auto& n : estimates)
    if (n.estimate.method == lipschitz::Method::SlopeSampling) return true;
  return false;
}

namespace {

lipschitz::LipschitzEstimate estimate(std::span<const expr::Expr> exprs, const BoxDomain& box,
                                      NormKind domain_norm, NormKind image_norm,
                                      const EstimateOptions& opt) {
  if (opt.method == EstimateMethod::Sampling) {
    auto fn = [exprs](std::span<const double> x) {
      Point r;
      for (const auto& e : exprs) r.push_back(e.eval(x));
      return r;
    };
    return lipschitz::slope_sampling_estimate(fn, box, domain_norm, image_norm, opt.pairs,
                                              opt.inflation, opt.seed);
  }
  std::size_t grid = opt.grid_per_dim;
  const double n = static_cast<double>(box.dimension());
  while (grid > 2 && std::pow(static_cast<double>(grid), n) > double(opt.max_grid_points)) --grid;
  auto est = lipschitz::jacobian_sup_bound(exprs, box, domain_norm, image_norm, grid,
                                           lipschitz::default_safety(exprs, opt.safety),
                                           opt.threads);
  if (grid != opt.grid_per_dim)
    est.warnings.push_back("grid reduced to " + std::to_string(grid) + " points per dimension");
  return est;
}

}  // namespace

Instantiated instantiate(const ProblemFile& file, const EstimateOptions& options) {
  if (file.bounds.size() != file.dimension) throw ConfigError("bounds do not match dimension");
  Point lo, hi;
  for (const auto& [l, h] : file.bounds) {
    lo.push_back(l);
    hi.push_back(h);
  }
  BoxDomain box;
  try {
    box = BoxDomain(lo, hi, file.integral);
  } catch (const UsageError& e) {
    throw ConfigError(e.what());
  }

  Instantiated inst{Problem{}, {}, expr::Expr::parse(file.objective, file.dimension), {}};
  for (const auto& c : file.constraints)
    inst.constraint_exprs.push_back(expr::Expr::parse(c.expr, file.dimension));

  Problem& p = inst.problem;
  p.domain = box;
  p.domain_norm = file.norm;

  if (file.objective_L) {
    p.objective.lipschitz_f = *file.objective_L;
  } else {
    auto est = estimate(std::span(&inst.objective_expr, 1), box, file.norm, NormKind::Two, options);
    p.objective.lipschitz_f = std::max(est.value, lipschitz::kEstimateFloor);
    inst.estimates.push_back({"objective_L", est});
  }
  p.objective.norm = file.norm;
  p.objective.evaluator = [e = inst.objective_expr](std::span<const double> x) {
    return e.eval(x);
  };

  ConstraintSpec& cs = p.constraints;
  cs.image_norm = file.image_norm;
  for (const auto& e : inst.constraint_exprs)
    cs.components.push_back([e](std::span<const double> x) { return e.eval(x); });

  if (file.global_L) {
    cs.global_L = *file.global_L;
  } else {
    auto est = estimate(inst.constraint_exprs, box, file.norm, file.image_norm, options);
    cs.global_L = std::max(est.value, lipschitz::kEstimateFloor);
    inst.estimates.push_back({"global_L", est});
  }

  bool any_given = false, all_given = true;
  for (const auto& c : file.constraints) {
    any_given = any_given || c.L.has_value();
    all_given = all_given && c.L.has_value();
  }
  const bool want_component = file.cut_mode == CutMode::Component;
  if (all_given || any_given || want_component) {
    std::vector<double> lp;
    for (std::size_t q = 0; q < file.constraints.size(); ++q) {
      if (file.constraints[q].L) {
        lp.push_back(*file.constraints[q].L);
        continue;
      }
      auto est = estimate(std::span(&inst.constraint_exprs[q], 1), box, file.norm,
                          file.image_norm, options);
      lp.push_back(std::max(est.value, lipschitz::kEstimateFloor));
      inst.estimates.push_back({"L[" + std::to_string(q + 1) + "]", est});
    }
    cs.component_L = lp;
  }

  bool any_mask = false;
  for (const auto& c : file.constraints) any_mask = any_mask || !c.mask.empty();
  if (any_mask) {
    for (const auto& c : file.constraints) {
      std::vector<bool> m(file.dimension, c.mask.empty());
      for (std::size_t j : c.mask) m[j - 1] = true;
      cs.active_masks.push_back(std::move(m));
    }
  }
  p.validate();
  return inst;
}

std::optional<Point> linear_objective(const Instantiated& inst) {
  const BoxDomain& box = inst.problem.domain;
  const std::size_t n = box.dimension();
  const Point c = box.center();
  const Point w = box.widths();
  try {
    const double f0 = inst.objective_expr.eval(c);
    Point coef(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (w[j] == 0.0) continue;
      Point x = c;
      x[j] += 0.5 * w[j];
      coef[j] = (inst.objective_expr.eval(x) - f0) / (0.5 * w[j]);
    }
    std::mt19937_64 rng(12345);
    double scale = std::abs(f0);
    for (std::size_t j = 0; j < n; ++j) scale += std::abs(coef[j]) * w[j];
    for (int s = 0; s < 16; ++s) {
      Point x(n);
      double pred = f0;
      for (std::size_t j = 0; j < n; ++j) {
        x[j] = box.lower()[j] + w[j] * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        pred += coef[j] * (x[j] - c[j]);
      }
      if (std::abs(inst.objective_expr.eval(x) - pred) > 1e-9 * (1.0 + scale)) return std::nullopt;
    }
    return coef;
  } catch (const EvalError&) {
    return std::nullopt;
  }
}

}  // namespace nic::io
