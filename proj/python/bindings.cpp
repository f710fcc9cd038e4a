#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "l1saddle/bench.hpp"
#include "l1saddle/io.hpp"
#include "l1saddle/synth.hpp"

namespace py = pybind11;
using namespace l1saddle;

namespace {

// Labels cross the boundary 0-based, as numpy users expect.
Dataset make_dataset(const Matrix& x, const std::vector<int>& y, int k) {
  if (static_cast<Eigen::Index>(y.size()) != x.rows()) {
    throw InputError("x has " + std::to_string(x.rows()) + " rows but y has " +
                     std::to_string(y.size()) + " labels");
  }
  if (k <= 0) {
    for (int label : y) k = std::max(k, label + 1);
  }
  return Dataset(x, y, k);
}

py::dict report_dict(const std::vector<GapReport>& reports) {
  std::vector<std::int64_t> iterations;
  std::vector<double> primal, dual, gap, seconds;
  for (const GapReport& r : reports) {
    iterations.push_back(r.iterations);
    primal.push_back(r.primal_obj);
    dual.push_back(r.dual_obj);
    gap.push_back(r.gap);
    seconds.push_back(r.elapsed_seconds);
  }
  py::dict out;
  out["iterations"] = iterations;
  out["primal"] = primal;
  out["dual"] = dual;
  out["gap"] = gap;
  out["seconds"] = seconds;
  return out;
}

py::dict train_py(const Matrix& x, const std::vector<int>& y, int k, const std::string& solver,
                  const std::string& loss, double radius, double lam, std::int64_t iterations,
                  std::uint64_t seed, std::int64_t gap_every, std::int64_t flush_every) {
  const Dataset data = make_dataset(x, y, k);
  TrainOptions options;
  options.solver = parse_solver(solver);
  options.loss = parse_loss(loss);
  options.radius = radius;
  options.lambda = lam;
  options.config.iterations = iterations;
  options.config.seed = seed;
  options.config.gap_every = gap_every;
  options.config.flush_every = flush_every;
  TrainOutcome outcome;
  {
    py::gil_scoped_release release;
    outcome = train(data, options);
  }
  py::dict out;
  out["u"] = outcome.folded;
  out["primal"] = outcome.primal_obj;
  out["seconds"] = outcome.seconds;
  out["gamma"] = outcome.gamma;
  out["reports"] = report_dict(outcome.reports);
  return out;
}

}  // namespace

PYBIND11_MODULE(_l1saddle, m) {
  m.doc() = "l1-regularized multiclass classification by saddle-point mirror descent";

  m.def(
      "synth",
      [](int n, int d, int k, std::uint64_t seed) {
        const SyntheticProblem p = synth_generate(n, d, k, seed);
        return py::make_tuple(p.data.features(), p.data.labels(), p.planted);
      },
      py::arg("n"), py::arg("d"), py::arg("k"), py::arg("seed") = 0,
      "Planted synthetic problem. Returns (x, y, planted) with 0-based labels.");

  m.def("train", &train_py, py::arg("x"), py::arg("y"), py::arg("k") = 0,
        py::arg("solver") = "md", py::arg("loss") = "hinge", py::arg("radius") = 1.0,
        py::arg("lam") = 1e-3, py::arg("iterations") = 1000, py::arg("seed") = 0,
        py::arg("gap_every") = 0, py::arg("flush_every") = 10000,
        "Fit a d x k model. Returns a dict with u, primal, seconds, gamma and reports.");

  m.def(
      "primal_objective",
      [](const Matrix& u, const Matrix& x, const std::vector<int>& y, int k, double lam,
         const std::string& loss) {
        return primal_objective(u, make_dataset(x, y, k), lam, parse_loss(loss));
      },
      py::arg("u"), py::arg("x"), py::arg("y"), py::arg("k") = 0, py::arg("lam") = 1e-3,
      py::arg("loss") = "hinge");

  m.def(
      "duality_gap",
      [](const Matrix& u, const Matrix& x, const std::vector<int>& y, int k, double radius,
         double lam, const std::string& loss) {
        const Dataset data = make_dataset(x, y, k);
        const LossKind kind = parse_loss(loss);
        const ProblemGeometry g = geometry_from(data, radius, lam, kind);
        const GapReport r = duality_gap(u, best_response_dual(u, data, kind), data, g, kind);
        return py::make_tuple(r.primal_obj, r.dual_obj, r.gap);
      },
      py::arg("u"), py::arg("x"), py::arg("y"), py::arg("k") = 0, py::arg("radius") = 1.0,
      py::arg("lam") = 1e-3, py::arg("loss") = "hinge",
      "(primal, dual, gap) of a model against its best-response dual.");

  m.def(
      "load_dataset",
      [](const std::string& path, const std::string& format) {
        const Dataset data = load_dataset(path, parse_format(format));
        return py::make_tuple(data.features(), data.labels(), data.k());
      },
      py::arg("path"), py::arg("format") = "dense-csv",
      "Returns (x, y, k) with 0-based labels.");
}
