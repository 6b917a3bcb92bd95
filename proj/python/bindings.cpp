#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <string>

#include "nic/bounds.hpp"
#include "nic/core.hpp"
#include "nic/driver.hpp"
#include "nic/errors.hpp"
#include "nic/expr.hpp"
#include "nic/lipschitz.hpp"
#include "nic/oracle.hpp"
#include "nic/problem_io.hpp"
#include "nic/reform.hpp"

namespace py = pybind11;
using namespace nic;

namespace {

io::ProblemFile source(const std::optional<std::string>& json, const std::optional<std::string>& builtin) {
  if (json.has_value() == builtin.has_value()) throw UsageError("give exactly one of problem_json or builtin");
  return json ? io::parse_problem(*json) : io::builtin(*builtin);
}

py::dict record_dict(const IterationRecord& r) {
  py::dict d;
  d["k"] = r.k;
  d["point"] = r.point;
  d["objective"] = r.objective;
  d["violation_norm"] = r.violation_norm;
  d["violation_max"] = r.violation_max;
  d["radius"] = r.radius;
  d["attaining_component"] = r.attaining_component;
  return d;
}

py::dict solve(const std::optional<std::string>& problem_json, const std::optional<std::string>& builtin,
               const std::string& oracle, std::optional<double> eps, std::optional<std::size_t> max_iters,
               const std::optional<std::string>& mode, double oracle_tol, const Point& start,
               bool normalize, bool allow_heuristic_L) {
  const io::ProblemFile file = source(problem_json, builtin);
  const io::Instantiated inst = io::instantiate(file);
  if (inst.any_heuristic() && !allow_heuristic_L)
    throw UsageError("sampled Lipschitz estimates need allow_heuristic_L=True");
  const Problem problem = normalize ? normalized(inst.problem) : inst.problem;

  DriverConfig cfg = DriverConfig::approximate(eps.value_or(file.epsilon.value_or(0.0)));
  cfg.max_iterations = max_iters.value_or(file.max_iterations.value_or(1000));
  if (mode) cfg.cut_mode = parse_cut_mode(*mode);
  else if (file.cut_mode) cfg.cut_mode = *file.cut_mode;
  cfg.start = start;

  oracle::OracleConfig ocfg;
  ocfg.tolerance = oracle_tol;
  std::unique_ptr<oracle::Oracle> orc;
  if (oracle == "global") orc = std::make_unique<oracle::GlobalOracle>(ocfg);
  else if (oracle == "local") orc = std::make_unique<oracle::LocalOracle>(ocfg);
  else throw UsageError("oracle must be 'global' or 'local'");

  SolveOutcome out;
  {
    py::gil_scoped_release release;
    out = run(problem, *orc, cfg);
  }
  py::list trace;
  for (const auto& r : out.trace) trace.append(record_dict(r));
  py::dict d;
  d["status"] = to_string(out.status);
  d["trace"] = trace;
  d["final_point"] = out.final_point;
  d["lower_bound"] = out.lower_bound;
  d["lipschitz"] = problem.constraints.global_L;
  return d;
}

BoxDomain box_of(const Point& lower, const Point& upper) { return BoxDomain(lower, upper); }

reform::ReformSystem build(const Point& center, double radius, const std::string& norm, double big_M) {
  const NormKind k = parse_norm(norm);
  if (k == NormKind::One) return reform::reformulate_1norm(center, radius, big_M);
  if (k == NormKind::Inf) return reform::reformulate_infnorm(center, radius, big_M);
  throw UsageError("only 1 and inf norm cuts have a linear encoding");
}

}  // namespace

PYBIND11_MODULE(_nic, m) {
  m.doc() = "Lipschitz cutting-plane solver";

  py::register_exception<ResourceError>(m, "ResourceError", PyExc_RuntimeError);
  py::register_exception<InfeasibleStartError>(m, "InfeasibleStartError", PyExc_RuntimeError);
  py::register_exception<EvalError>(m, "EvalError", PyExc_ArithmeticError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  m.def("builtins", [] {
    std::vector<std::string> names;
    for (const auto& f : io::builtin_problems()) names.push_back(f.name);
    return names;
  });
  m.def("builtin_json", [](const std::string& name) { return io::to_json(io::builtin(name)); }, py::arg("name"));

  m.def("solve", &solve, py::arg("problem_json") = py::none(), py::arg("builtin") = py::none(),
        py::arg("oracle") = "global", py::arg("eps") = py::none(), py::arg("max_iters") = py::none(),
        py::arg("mode") = py::none(), py::arg("oracle_tol") = 1e-6, py::arg("start") = Point{},
        py::arg("normalize") = false, py::arg("allow_heuristic_L") = false);

  m.def("evaluate",
        [](const std::string& text, const Point& x) { return expr::Expr::parse(text, x.size()).eval(x); },
        py::arg("expr"), py::arg("x"));

  m.def("induced_norm",
        [](const std::vector<std::vector<double>>& rows, const std::string& domain, const std::string& image) {
          expr::Matrix a(rows.size(), rows.empty() ? 0 : rows[0].size());
          for (std::size_t i = 0; i < a.rows; ++i) {
            if (rows[i].size() != a.cols) throw UsageError("ragged matrix");
            for (std::size_t j = 0; j < a.cols; ++j) a(i, j) = rows[i][j];
          }
          return lipschitz::induced_norm(a, parse_norm(domain), parse_norm(image));
        },
        py::arg("matrix"), py::arg("domain"), py::arg("image"));

  m.def("lattice_count", [](const Point& lo, const Point& hi) { return bounds::lattice_count(box_of(lo, hi)).value; },
        py::arg("lower"), py::arg("upper"));
  m.def("box_packing_bound",
        [](const Point& lo, const Point& hi, double L, double delta) {
          return bounds::box_packing_bound(box_of(lo, hi), L, delta).value;
        },
        py::arg("lower"), py::arg("upper"), py::arg("lipschitz"), py::arg("delta"));
  m.def("complexity_upper", [](double rho, double eps, int n) { return bounds::complexity_upper(rho, eps, n).value; },
        py::arg("rho"), py::arg("epsilon"), py::arg("n"));
  m.def("complexity_lower",
        [](double alpha, double eps, int n, double c) { return bounds::complexity_lower(alpha, eps, n, c).value; },
        py::arg("alpha"), py::arg("epsilon"), py::arg("n"), py::arg("c") = 1.0);

  m.def("default_big_M",
        [](const Point& lo, const Point& hi, const std::string& norm) {
          return reform::default_big_M(box_of(lo, hi), parse_norm(norm));
        },
        py::arg("lower"), py::arg("upper"), py::arg("norm"));
  m.def("cut_encoding_accepts",
        [](const Point& center, double radius, const std::string& norm, double big_M, const Point& x) {
          return reform::verify_by_enumeration(build(center, radius, norm, big_M), x);
        },
        py::arg("center"), py::arg("radius"), py::arg("norm"), py::arg("big_M"), py::arg("x"));
  m.def("cut_encoding_size",
        [](const Point& center, double radius, const std::string& norm, double big_M) {
          const auto s = build(center, radius, norm, big_M);
          return py::make_tuple(s.continuous_vars.size(), s.binary_vars.size(), s.constraints.size());
        },
        py::arg("center"), py::arg("radius"), py::arg("norm"), py::arg("big_M"));
}
