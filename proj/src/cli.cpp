#include "nic/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "nic/bounds.hpp"
#include "nic/driver.hpp"
#include "nic/errors.hpp"
#include "nic/oracle.hpp"
#include "nic/problem_io.hpp"
#include "nic/reform.hpp"

namespace nic::cli {

namespace {

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string point_text(std::span<const double> x) {
  std::string s;
  for (std::size_t j = 0; j < x.size(); ++j) s += (j ? ", " : "") + num(x[j]);
  return "(" + s + ")";
}

Point parse_vector(const std::string& text, const char* what) {
  Point v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw UsageError(std::string("malformed ") + what + " '" + text + "'");
    }
  }
  if (v.empty()) throw UsageError(std::string("empty ") + what);
  return v;
}

struct Source {
  std::string problem_path;
  std::string builtin_name;

  void attach(CLI::App& cmd) {
    auto* p = cmd.add_option("--problem", problem_path, "problem file (JSON)");
    auto* b = cmd.add_option("--builtin", builtin_name, "builtin problem name");
    p->excludes(b);
  }

  [[nodiscard]] io::ProblemFile load() const {
    if (!problem_path.empty()) return io::load_problem(problem_path);
    if (!builtin_name.empty()) return io::builtin(builtin_name);
    throw UsageError("one of --problem or --builtin is required");
  }
};

void echo_estimates(const io::Instantiated& inst, std::ostream& out) {
  for (const auto& note : inst.estimates) {
    out << "estimated " << note.target << " = " << num(note.estimate.value) << " ("
        << lipschitz::to_string(note.estimate.method) << ", safety "
        << num(note.estimate.safety_factor) << ", " << note.estimate.samples_used
        << " samples)\n";
    for (const auto& w : note.estimate.warnings) out << "  warning: " << w << '\n';
  }
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  Source source;
  std::string oracle = "global";
  std::optional<double> eps;
  std::optional<std::size_t> max_iters;
  std::optional<std::string> mode;
  std::string trace;
  bool allow_heuristic = false;
  std::string estimate = "grid";
  double oracle_tol = 1e-6;
  std::size_t node_limit = 10'000'000;
  std::uint64_t seed = 0;
  std::string start;
  bool normalize = false;
  unsigned threads = 1;
};

int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  const io::ProblemFile file = a.source.load();
  io::EstimateOptions est;
  est.method = a.estimate == "sampling" ? io::EstimateMethod::Sampling : io::EstimateMethod::Grid;
  est.seed = a.seed;
  est.threads = a.threads;
  const io::Instantiated inst = io::instantiate(file, est);
  echo_estimates(inst, out);
  if (inst.any_heuristic() && !a.allow_heuristic) {
    err << "error: sampled Lipschitz estimates may under-estimate and make cuts unsafe; "
           "pass --allow-heuristic-L to use them\n";
    return kExitError;
  }

  Problem problem = a.normalize ? normalized(inst.problem) : inst.problem;

  DriverConfig cfg = DriverConfig::approximate(a.eps.value_or(file.epsilon.value_or(0.0)));
  cfg.max_iterations = a.max_iters.value_or(file.max_iterations.value_or(1000));
  if (a.mode) cfg.cut_mode = parse_cut_mode(*a.mode);
  else if (file.cut_mode) cfg.cut_mode = *file.cut_mode;
  if (!a.start.empty()) cfg.start = parse_vector(a.start, "start point");

  oracle::OracleConfig ocfg;
  ocfg.tolerance = a.oracle_tol;
  ocfg.node_limit = a.node_limit;
  std::unique_ptr<oracle::Oracle> orc;
  if (a.oracle == "global") {
    orc = std::make_unique<oracle::GlobalOracle>(ocfg);
    if (!cfg.start.empty()) err << "warning: --start is ignored by the global oracle\n";
  } else {
    orc = std::make_unique<oracle::LocalOracle>(ocfg);
  }

  out << "problem: " << (file.name.empty() ? "(unnamed)" : file.name) << '\n'
      << "oracle: " << orc->name() << " (tol " << num(ocfg.tolerance) << ")\n"
      << "mode: " << to_string(cfg.cut_mode) << ", epsilon " << num(cfg.epsilon)
      << (a.normalize ? ", normalized constraints" : "") << '\n'
      << "L: " << num(problem.constraints.global_L) << '\n';

  SolveOutcome outcome;
  bool aborted = false;
  try {
    outcome = run(problem, *orc, cfg);
  } catch (const RunAborted& e) {
    err << "error: " << e.what() << '\n';
    outcome = e.partial();
    aborted = true;
  }

  if (!a.trace.empty()) {
    std::ofstream f(a.trace, std::ios::binary);
    if (!f) throw ConfigError("cannot write trace file " + a.trace);
    write_trace_csv(f, outcome.trace, problem.domain.dimension());
  }
  if (aborted) return kExitError;

  out << "status: " << to_string(outcome.status) << '\n'
      << "iterations: " << outcome.trace.size() << '\n';
  if (outcome.final_point) {
    out << "final point: " << point_text(*outcome.final_point) << '\n'
        << "objective: " << num(outcome.trace.back().objective) << '\n';
  }
  out << "lower bound: " << num(outcome.lower_bound);
  if (!orc->is_global()) out << " (local oracle: not a certified bound)";
  out << '\n';

  switch (outcome.status) {
    case SolveStatus::Solved: return kExitSolved;
    case SolveStatus::InfeasibleCertified: return kExitInfeasible;
    case SolveStatus::IterationLimit: return kExitIterationLimit;
  }
  return kExitError;
}

// ---------------------------------------------------------------- bounds

struct BoundsArgs {
  Source source;
  std::optional<double> delta;
  std::optional<double> eps;
  double c = 1.0;
};

void print_report(const bounds::BoundReport& rep, std::ostream& out) {
  out << bounds::to_string(rep.kind) << ": " << num(rep.value) << '\n';
  for (const auto& w : rep.warnings) out << "  warning: " << w << '\n';
}

int cmd_bounds(const BoundsArgs& a, std::ostream& out, std::ostream& /*err*/) {
  if (!a.delta && !a.eps) throw UsageError("bounds needs --delta or --eps");
  const io::ProblemFile file = a.source.load();
  const io::Instantiated inst = io::instantiate(file);
  echo_estimates(inst, out);
  const Problem& p = inst.problem;
  const int n = static_cast<int>(p.domain.dimension());

  const auto ra = bounds::box_radius_asphericity(p.domain, p.domain_norm);
  out << "norm: " << to_string(p.domain_norm) << '\n'
      << "radius: " << num(ra.radius) << '\n'
      << "asphericity: " << (ra.asphericity ? num(*ra.asphericity) : "undefined") << '\n';

  if (a.delta) {
    out << "L: " << num(p.constraints.global_L) << ", delta: " << num(*a.delta) << '\n';
    if (p.domain.any_integral()) {
      print_report(bounds::lattice_count(p.domain), out);
    } else {
      auto rep = bounds::box_packing_bound(p.domain, p.constraints.global_L, *a.delta);
      if (p.domain_norm != NormKind::Inf && n > 1)
        rep.warnings.emplace_back("the box bound is stated for the max-norm");
      print_report(rep, out);
    }
  }
  if (a.eps) {
    print_report(bounds::complexity_upper(ra.radius, *a.eps, n), out);
    if (ra.asphericity) print_report(bounds::complexity_lower(*ra.asphericity, *a.eps, n, a.c), out);
  }
  return kExitSolved;
}

// ---------------------------------------------------------------- estimate-lipschitz

struct EstimateArgs {
  Source source;
  std::string method = "grid";
  std::size_t grid = 64;
  std::optional<double> safety;
  std::size_t pairs = 10'000;
  double inflation = 0.1;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

int cmd_estimate(const EstimateArgs& a, std::ostream& out, std::ostream& /*err*/) {
  const io::ProblemFile file = a.source.load();
  const std::size_t n = file.dimension;
  Point lo, hi;
  for (const auto& [l, h] : file.bounds) {
    lo.push_back(l);
    hi.push_back(h);
  }
  const BoxDomain box(lo, hi, file.integral);
  std::vector<expr::Expr> exprs;
  for (const auto& c : file.constraints) exprs.push_back(expr::Expr::parse(c.expr, n));

  auto run_one = [&](std::span<const expr::Expr> es) {
    if (a.method == "sampling") {
      auto fn = [es](std::span<const double> x) {
        Point r;
        for (const auto& e : es) r.push_back(e.eval(x));
        return r;
      };
      return lipschitz::slope_sampling_estimate(fn, box, file.norm, file.image_norm, a.pairs,
                                                a.inflation, a.seed);
    }
    const double safety = a.safety.value_or(lipschitz::default_safety(es));
    return lipschitz::jacobian_sup_bound(es, box, file.norm, file.image_norm, a.grid, safety,
                                         a.threads);
  };
  const bool squared = file.norm == NormKind::Two;
  auto report = [&](const std::string& label, const lipschitz::LipschitzEstimate& e) {
    out << label << " = " << num(e.value);
    if (squared) out << "  (squared " << num(e.value * e.value) << ")";
    out << "  [" << lipschitz::to_string(e.method) << ", safety " << num(e.safety_factor) << ", "
        << e.samples_used << " samples" << (e.exact_operator_norm ? "" : ", inexact norm")
        << "]\n";
    for (const auto& w : e.warnings) out << "  warning: " << w << '\n';
  };
  out << "problem: " << file.name << "  (domain norm " << to_string(file.norm) << ", image norm "
      << to_string(file.image_norm) << ")\n";
  for (std::size_t q = 0; q < exprs.size(); ++q) {
    report("L" + std::to_string(q + 1), run_one(std::span(&exprs[q], 1)));
  }
  report("L", run_one(exprs));
  return kExitSolved;
}

// ---------------------------------------------------------------- emit-milp

struct MilpArgs {
  Source source;
  std::string trace;
  std::vector<std::string> cuts;
  std::string norm = "1";
  std::string out_path;
  std::optional<double> big_M;
  bool quadratic = false;
};

int cmd_emit_milp(const MilpArgs& a, std::ostream& out, std::ostream& err) {
  if (!a.trace.empty() && !a.cuts.empty()) throw UsageError("use either --trace or --cut");
  if (a.out_path.empty()) throw UsageError("emit-milp needs --out");
  const io::ProblemFile file = a.source.load();
  const io::Instantiated inst = io::instantiate(file);
  const BoxDomain& box = inst.problem.domain;
  const std::size_t n = box.dimension();
  const NormKind norm = parse_norm(a.norm);
  if (norm == NormKind::Two && !a.quadratic)
    throw UsageError("2-norm cuts have no linear encoding; pass --quadratic to emit them as "
                     "quadratic rows");

  std::vector<std::pair<Point, double>> cuts;
  if (!a.trace.empty()) {
    std::ifstream in(a.trace);
    if (!in) throw ConfigError("cannot open trace file " + a.trace);
    for (const auto& rec : read_trace_csv(in)) {
      if (rec.point.size() != n) throw UsageError("trace dimension does not match the problem");
      if (rec.radius > 0.0) cuts.emplace_back(rec.point, rec.radius);
    }
  }
  for (const auto& text : a.cuts) {
    const auto semi = text.find(';');
    if (semi == std::string::npos) throw UsageError("cut must look like \"c1,c2,...;radius\"");
    Point center = parse_vector(text.substr(0, semi), "cut center");
    const Point r = parse_vector(text.substr(semi + 1), "cut radius");
    if (center.size() != n || r.size() != 1) throw UsageError("malformed cut '" + text + "'");
    cuts.emplace_back(std::move(center), r[0]);
  }

  std::optional<Point> objective = io::linear_objective(inst);
  if (!objective) {
    err << "warning: objective is not linear; writing a zero objective\n";
    objective = Point(n, 0.0);
  }

  std::vector<reform::ReformSystem> systems;
  std::vector<reform::QuadraticCut> quad;
  const double big_M = a.big_M.value_or(reform::default_big_M(box, norm));
  for (const auto& [center, radius] : cuts) {
    if (norm == NormKind::Two) quad.push_back({center, radius, {}});
    else if (norm == NormKind::One) systems.push_back(reform::reformulate_1norm(center, radius, big_M));
    else systems.push_back(reform::reformulate_infnorm(center, radius, big_M));
  }
  if (norm != NormKind::Two) {
    double need = 0.0;
    for (const auto& [center, radius] : cuts)
      for (std::size_t j = 0; j < n; ++j)
        need = std::max(need, 2.0 * std::max(box.upper()[j] - center[j], center[j] - box.lower()[j]));
    if (big_M < need)
      err << "warning: big-M " << num(big_M) << " can cut off box points; " << num(need)
          << " is large enough for these cuts\n";
  }
  const std::string lp = reform::export_lp(systems, *objective, box, quad);
  std::ofstream f(a.out_path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + a.out_path);
  f << lp;

  std::size_t cont = 0, bin = 0, rows = 0;
  for (const auto& s : systems) {
    cont += s.continuous_vars.size();
    bin += s.binary_vars.size();
    rows += s.constraints.size();
  }
  out << "cuts: " << cuts.size() << '\n'
      << "variables: " << n << " original, " << cont << " continuous, " << bin << " binary\n"
      << "constraints: " << rows << " linear, " << quad.size() << " quadratic\n"
      << "big-M: " << num(big_M) << '\n'
      << "wrote " << a.out_path << '\n';
  return kExitSolved;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Norm-induced cuts for Lipschitz-constrained problems", "nic"};
  app.require_subcommand(1);

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "run the cutting loop");
  sa.source.attach(*solve);
  solve->add_option("--oracle", sa.oracle)->check(CLI::IsMember({"global", "local"}));
  solve->add_option("--eps", sa.eps, "approximation tolerance (0 = exact)");
  solve->add_option("--max-iters", sa.max_iters);
  solve->add_option("--mode", sa.mode)->check(CLI::IsMember({"vector", "component"}));
  solve->add_option("--trace", sa.trace, "write the iteration trace as CSV");
  solve->add_flag("--allow-heuristic-L", sa.allow_heuristic);
  solve->add_option("--estimate", sa.estimate, "how missing constants are estimated")
      ->check(CLI::IsMember({"grid", "sampling"}));
  solve->add_option("--oracle-tol", sa.oracle_tol)->check(CLI::PositiveNumber);
  solve->add_option("--node-limit", sa.node_limit)->check(CLI::PositiveNumber);
  solve->add_option("--seed", sa.seed);
  solve->add_option("--start", sa.start, "comma-separated start point for the local oracle");
  solve->add_flag("--normalize", sa.normalize, "scale r by 1/(rho L)");
  solve->add_option("--threads", sa.threads, "threads for Lipschitz estimation")
      ->check(CLI::PositiveNumber);

  BoundsArgs ba;
  auto* bnd = app.add_subcommand("bounds", "iteration and complexity bounds");
  ba.source.attach(*bnd);
  bnd->add_option("--delta", ba.delta)->check(CLI::PositiveNumber);
  bnd->add_option("--eps", ba.eps)->check(CLI::PositiveNumber);
  bnd->add_option("--c", ba.c, "constant of the lower complexity bound")
      ->check(CLI::PositiveNumber);

  EstimateArgs ea;
  auto* est = app.add_subcommand("estimate-lipschitz", "estimate Lipschitz constants");
  ea.source.attach(*est);
  est->add_option("--method", ea.method)->check(CLI::IsMember({"grid", "sampling"}));
  est->add_option("--grid", ea.grid)->check(CLI::PositiveNumber);
  est->add_option("--safety", ea.safety)->check(CLI::PositiveNumber);
  est->add_option("--pairs", ea.pairs)->check(CLI::PositiveNumber);
  est->add_option("--inflation", ea.inflation)->check(CLI::NonNegativeNumber);
  est->add_option("--seed", ea.seed);
  est->add_option("--threads", ea.threads)->check(CLI::PositiveNumber);

  MilpArgs ma;
  auto* milp = app.add_subcommand("emit-milp", "write cuts as a mixed-binary LP file");
  ma.source.attach(*milp);
  milp->add_option("--trace", ma.trace, "take cuts from a trace CSV");
  milp->add_option("--cut", ma.cuts, "\"c1,c2,...;radius\" (repeatable)");
  milp->add_option("--norm", ma.norm)->check(CLI::IsMember({"1", "2", "inf"}));
  milp->add_option("--out", ma.out_path);
  milp->add_option("--big-M", ma.big_M)->check(CLI::PositiveNumber);
  milp->add_flag("--quadratic", ma.quadratic, "emit 2-norm cuts as quadratic rows");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitSolved : kExitError;
  }

  try {
    if (solve->parsed()) return cmd_solve(sa, out, err);
    if (bnd->parsed()) return cmd_bounds(ba, out, err);
    if (est->parsed()) return cmd_estimate(ea, out, err);
    if (milp->parsed()) return cmd_emit_milp(ma, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace nic::cli
