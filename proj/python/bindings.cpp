#include <algorithm>

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ifsdf/constructions.hpp"
#include "ifsdf/distfn.hpp"
#include "ifsdf/ifs.hpp"
#include "ifsdf/inverse.hpp"
#include "ifsdf/io.hpp"
#include "ifsdf/randstats.hpp"
#include "ifsdf/simulation.hpp"

namespace py = pybind11;
using namespace ifsdf;

namespace {

using DFPtr = std::shared_ptr<DistributionFunction>;

DFPtr mutable_ptr(DistributionFunctionPtr f) { return std::const_pointer_cast<DistributionFunction>(std::move(f)); }

std::vector<double> eval_many(const DistributionFunction& f, const std::vector<double>& xs) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(f.eval(x));
  return out;
}

}  // namespace

PYBIND11_MODULE(_ifsdf, m) {
  m.doc() = "Distribution functions as fixed points of iterated function systems";

  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<DistributionFunction, DFPtr>(m, "DistributionFunction")
      .def("__call__", &DistributionFunction::eval, py::arg("x"))
      .def("eval", &DistributionFunction::eval, py::arg("x"))
      .def("eval_many", &eval_many, py::arg("xs"))
      .def("left_limit", &DistributionFunction::eval_left_limit, py::arg("x"))
      .def("breakpoints", &DistributionFunction::breakpoints);

  py::class_<AnalyticDF, DistributionFunction, std::shared_ptr<AnalyticDF>>(m, "AnalyticDF")
      .def(py::init<std::function<double(double)>, std::string>(), py::arg("cdf"), py::arg("name") = "analytic");

  py::class_<EmpiricalDF, DistributionFunction, std::shared_ptr<EmpiricalDF>>(m, "EmpiricalDF")
      .def(py::init<std::vector<double>>(), py::arg("sample"))
      .def_property_readonly("sample", &EmpiricalDF::sample);

  py::enum_<Interpolation>(m, "Interpolation")
      .value("STEP", Interpolation::kStep)
      .value("LINEAR", Interpolation::kLinear);

  py::class_<GridDF, DistributionFunction, std::shared_ptr<GridDF>>(m, "GridDF")
      .def(py::init<std::vector<double>, std::vector<double>, Interpolation>(), py::arg("xs"), py::arg("values"),
           py::arg("mode") = Interpolation::kLinear)
      .def_static(
          "sample",
          [](const DistributionFunction& f, std::vector<double> mesh, Interpolation mode) {
            return std::make_shared<GridDF>(GridDF::sample(f, std::move(mesh), mode));
          },
          py::arg("f"), py::arg("mesh"), py::arg("mode") = Interpolation::kLinear)
      .def_property_readonly("xs", &GridDF::xs)
      .def_property_readonly("values", &GridDF::values)
      .def_property_readonly("left_values", &GridDF::left_values)
      .def("to_csv", [](const GridDF& g) { return grid_to_csv(g); });

  m.def("grid_from_csv", [](const std::string& text) { return std::make_shared<GridDF>(grid_from_csv(text)); });
  m.def("uniform_df", [] { return mutable_ptr(uniform_df()); });
  m.def("uniform_mesh", &uniform_mesh, py::arg("m"));
  m.def("sup_distance", &sup_distance, py::arg("f"), py::arg("g"), py::arg("grid_size") = kDefaultSupGridSize);
  m.def(
      "sup_distance_at",
      [](const DistributionFunction& f, const DistributionFunction& g, const std::vector<double>& points) {
        return sup_distance_at(f, g, points);
      },
      py::arg("f"), py::arg("g"), py::arg("points"));

  py::class_<AffineMap>(m, "AffineMap")
      .def(py::init<double, double, double, double>(), py::arg("a") = 0.0, py::arg("b") = 1.0,
           py::arg("slope") = 1.0, py::arg("intercept") = 0.0)
      .def_static("identity", &AffineMap::identity)
      .def_static("onto", &AffineMap::onto, py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"))
      .def_readwrite("a", &AffineMap::a)
      .def_readwrite("b", &AffineMap::b)
      .def_readwrite("slope", &AffineMap::slope)
      .def_readwrite("intercept", &AffineMap::intercept)
      .def("__eq__", [](const AffineMap& x, const AffineMap& y) { return x == y; })
      .def("__repr__", [](const AffineMap& w) {
        return "AffineMap(a=" + std::to_string(w.a) + ", b=" + std::to_string(w.b) +
               ", slope=" + std::to_string(w.slope) + ", intercept=" + std::to_string(w.intercept) + ")";
      });

  py::class_<IfsSystem>(m, "IfsSystem")
      .def(py::init([](std::vector<AffineMap> maps, std::vector<double> p, std::vector<double> delta,
                       bool identity_partition) {
             return IfsSystem{std::move(maps), std::move(p), std::move(delta), identity_partition};
           }),
           py::arg("maps"), py::arg("p"), py::arg("delta"), py::arg("identity_partition") = false)
      .def_readwrite("maps", &IfsSystem::maps)
      .def_readwrite("p", &IfsSystem::p)
      .def_readwrite("delta", &IfsSystem::delta)
      .def_readwrite("identity_partition", &IfsSystem::identity_partition)
      .def("__len__", &IfsSystem::size)
      .def("__eq__", [](const IfsSystem& x, const IfsSystem& y) { return x == y; })
      .def("violations",
           [](const IfsSystem& s) {
             std::vector<std::string> out;
             for (const auto& v : validate(s)) out.push_back(v.message);
             return out;
           })
      .def("contractivity", &contractivity)
      .def("to_json", [](const IfsSystem& s) { return system_to_json(s).dump(2); })
      .def_static("from_json",
                  [](const std::string& text) { return system_from_json(nlohmann::json::parse(text)); });

  m.def(
      "apply", [](const IfsSystem& s, DFPtr f) { return mutable_ptr(ifsdf::apply(s, std::move(f))); }, py::arg("system"),
      py::arg("f"));
  m.def(
      "iterate",
      [](const IfsSystem& s, DFPtr u0, int steps, std::vector<double> mesh) {
        return std::make_shared<GridDF>(iterate(s, std::move(u0), steps, std::move(mesh)));
      },
      py::arg("system"), py::arg("u0"), py::arg("steps"), py::arg("mesh"));
  m.def(
      "fixed_point",
      [](const IfsSystem& s, double tol, std::vector<double> mesh) {
        auto r = fixed_point(s, tol, std::move(mesh));
        return py::make_tuple(std::make_shared<GridDF>(std::move(r.function)), r.iterations, r.error_bound);
      },
      py::arg("system"), py::arg("tol") = 1e-10, py::arg("mesh") = uniform_mesh(1025),
      "Returns (function, iterations, error_bound).");
  py::class_<IfsAttractorDF, DistributionFunction, std::shared_ptr<IfsAttractorDF>>(m, "IfsAttractorDF")
      .def(py::init<IfsSystem, double>(), py::arg("system"), py::arg("tol") = 1e-14);

  m.def("edf_ifs", &edf_ifs, py::arg("sample"));
  m.def("quantile_ifs", &quantile_ifs, py::arg("f"), py::arg("n_points"));
  m.def("quantile_estimator", &quantile_estimator, py::arg("sample"), py::arg("k"));
  m.def("empirical_quantile", [](std::vector<double> sample, double level) {
    std::sort(sample.begin(), sample.end());
    return empirical_quantile(sample, level);
  });

  py::enum_<CollageMode>(m, "CollageMode")
      .value("AUTO", CollageMode::kAuto)
      .value("EXACT_ENDPOINTS", CollageMode::kExactEndpoints)
      .value("GRID", CollageMode::kGrid);

  py::class_<CollageProblem>(m, "CollageProblem")
      .def(py::init([](DFPtr target, std::vector<AffineMap> maps, std::vector<double> delta, CollageMode mode,
                       std::size_t grid) { return CollageProblem(std::move(target), std::move(maps), std::move(delta), mode, grid); }),
           py::arg("target"), py::arg("maps"), py::arg("delta"), py::arg("mode") = CollageMode::kAuto,
           py::arg("grid_size") = kDefaultCollageGrid)
      .def_static(
          "identity_partition",
          [](DFPtr target, std::vector<double> cuts, std::vector<double> delta) {
            return CollageProblem::identity_partition(std::move(target), std::move(cuts), std::move(delta));
          }, py::arg("target"), py::arg("cuts"),
                  py::arg("delta") = std::vector<double>{})
      .def_property_readonly("num_weights", &CollageProblem::num_weights)
      .def_property_readonly("weight_budget", &CollageProblem::weight_budget)
      .def_property_readonly("mode", &CollageProblem::mode)
      .def("system", &CollageProblem::system, py::arg("p"))
      .def("distance", [](const CollageProblem& c, const std::vector<double>& p) { return collage_distance(c, p); });

  py::class_<InverseSolution>(m, "InverseSolution")
      .def_readonly("p_star", &InverseSolution::p_star)
      .def_readonly("d_star", &InverseSolution::d_star)
      .def_readonly("active_constraints", &InverseSolution::active_constraints)
      .def_readonly("iterations", &InverseSolution::iterations)
      .def_readonly("mode", &InverseSolution::mode)
      .def("to_json", [](const InverseSolution& s) { return solution_to_json(s).dump(2); });

  m.def("solve_inverse", &solve_inverse, py::arg("problem"), py::arg("tol") = 1e-8);
  m.def("solve_inverse_subgradient", &solve_inverse_subgradient, py::arg("problem"),
        py::arg("iterations") = 100000);
  m.def("collage_bound", &collage_bound, py::arg("epsilon"), py::arg("c"));

  py::class_<BetaParams>(m, "BetaParams")
      .def(py::init<double, double>(), py::arg("alpha"), py::arg("beta"))
      .def_readonly("alpha", &BetaParams::alpha)
      .def_readonly("beta", &BetaParams::beta)
      .def("__repr__", &BetaParams::label);
  m.def("parse_distribution", &parse_distribution);
  m.def("beta_cdf", &beta_cdf, py::arg("params"), py::arg("x"));
  m.def("beta_quantile", &beta_quantile, py::arg("params"), py::arg("u"));
  m.def(
      "beta_df", [](const BetaParams& params) { return mutable_ptr(beta_df(params)); }, py::arg("params"));
  m.def(
      "sample_beta",
      [](const BetaParams& params, std::size_t n, std::uint64_t seed) {
        SeededRng rng(seed);
        return sample_beta(params, n, rng);
      },
      py::arg("params"), py::arg("n"), py::arg("seed"));

  py::class_<TrialConfig>(m, "TrialConfig")
      .def(py::init<>())
      .def_readwrite("distribution", &TrialConfig::distribution)
      .def_readwrite("n", &TrialConfig::n)
      .def_readwrite("k", &TrialConfig::k)
      .def_readwrite("iterations", &TrialConfig::iterations)
      .def_readwrite("eval_points", &TrialConfig::eval_points)
      .def_readwrite("trials", &TrialConfig::trials)
      .def_readwrite("seed", &TrialConfig::seed)
      .def_readwrite("exact_sup", &TrialConfig::exact_sup)
      .def("effective_k", &TrialConfig::effective_k);

  py::class_<TableRow>(m, "TableRow")
      .def_readonly("k", &TableRow::k)
      .def_readonly("mean_a", &TableRow::mean_a)
      .def_readonly("mean_b", &TableRow::mean_b)
      .def_readonly("ratio_pct", &TableRow::ratio_pct)
      .def_readonly("mean_ratio_pct", &TableRow::mean_ratio_pct);

  m.def(
      "run_table",
      [](const std::vector<TrialConfig>& configs, unsigned threads) {
        SimulationTable t;
        {
          py::gil_scoped_release release;
          t = run_table(configs, threads);
        }
        return py::make_tuple(t.rows, table_to_csv(t));
      },
      py::arg("configs"), py::arg("threads") = 1, "Returns (rows, csv).");
}
