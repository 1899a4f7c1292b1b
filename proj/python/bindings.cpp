#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "netmorph/config.hpp"
#include "netmorph/diagnostics.hpp"
#include "netmorph/dynamics.hpp"
#include "netmorph/elliptic.hpp"
#include "netmorph/error.hpp"
#include "netmorph/grid_fields.hpp"
#include "netmorph/metrics.hpp"

namespace py = pybind11;
using namespace netmorph;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

ScalarField to_scalar(const Array& a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1)) {
    throw DimensionError("expected a square (N, N) array");
  }
  const int n = static_cast<int>(a.shape(0));
  return ScalarField(Grid(n), std::vector<double>(a.data(), a.data() + a.size()));
}

TensorField to_tensor(const Array& a) {
  if (a.ndim() != 3 || a.shape(0) != 3 || a.shape(1) != a.shape(2)) {
    throw DimensionError("expected a (3, N, N) array of c11, c12, c22");
  }
  const int n = static_cast<int>(a.shape(1));
  const std::size_t cells = static_cast<std::size_t>(n) * n;
  const double* d = a.data();
  const Grid g(n);
  return TensorField(ScalarField(g, std::vector<double>(d, d + cells)),
                     ScalarField(g, std::vector<double>(d + cells, d + 2 * cells)),
                     ScalarField(g, std::vector<double>(d + 2 * cells, d + 3 * cells)));
}

Array from_scalar(const ScalarField& f) {
  Array out({f.n(), f.n()});
  std::copy(f.values().begin(), f.values().end(), out.mutable_data());
  return out;
}

Array from_tensor(const TensorField& c) {
  Array out({3, c.n(), c.n()});
  double* d = out.mutable_data();
  for (int k = 0; k < 3; ++k) {
    auto v = c.component(k).values();
    d = std::copy(v.begin(), v.end(), d);
  }
  return out;
}

py::dict record_dict(const DiagnosticsRecord& r) {
  py::dict d;
  d["step"] = r.step;
  d["time"] = r.time;
  d["asymm_c"] = r.asymm_c;
  d["asymm_p"] = r.asymm_p;
  d["cond"] = r.cond_estimate ? py::cast(*r.cond_estimate) : py::none();
  d["energy"] = r.energy;
  d["min_eig"] = r.min_eig;
  d["max_c_norm"] = r.max_c_norm;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "C++ core of the tensor network-formation solver";
  m.attr("__version__") = NETMORPH_VERSION;

  auto& error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", error.ptr());

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<>())
      .def_readwrite("r", &ModelParams::r)
      .def_readwrite("d_coef", &ModelParams::d_coef)
      .def_readwrite("c_act", &ModelParams::c_act)
      .def_readwrite("alpha", &ModelParams::alpha)
      .def_readwrite("gamma", &ModelParams::gamma)
      .def_readwrite("eps", &ModelParams::eps)
      .def_readwrite("dt", &ModelParams::dt)
      .def_readwrite("t_fin", &ModelParams::t_fin)
      .def("validate", &ModelParams::validate);

  py::class_<SourceSpec>(m, "SourceSpec")
      .def(py::init<>())
      .def(py::init([](double x0, double y0, double sigma) { return SourceSpec{x0, y0, sigma}; }),
           py::arg("x0"), py::arg("y0"), py::arg("sigma"))
      .def_readwrite("x0", &SourceSpec::x0)
      .def_readwrite("y0", &SourceSpec::y0)
      .def_readwrite("sigma", &SourceSpec::sigma);

  m.def(
      "build_source", [](int n, const SourceSpec& s) { return from_scalar(build_source(Grid(n), s)); },
      py::arg("n"), py::arg("source") = SourceSpec{}, "Zero-sum Gaussian source on an n x n grid.");

  m.def(
      "initial_condition",
      [](int n, const std::string& kind) {
        return from_tensor(initial_condition(Grid(n), initial_condition_from_string(kind)));
      },
      py::arg("n"), py::arg("kind") = "constant_one",
      "constant_one, diagonal_ridge or zero, as a (3, n, n) array.");

  m.def(
      "assemble",
      [](const Array& c, double r) {
        const EllipticOperator op = assemble(to_tensor(c), r);
        const SparseMatrix& a = op.matrix();
        std::vector<int> rows, cols;
        std::vector<double> vals;
        for (int k = 0; k < a.outerSize(); ++k) {
          for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
            rows.push_back(it.row());
            cols.push_back(it.col());
            vals.push_back(it.value());
          }
        }
        return py::make_tuple(py::array(py::cast(rows)), py::array(py::cast(cols)),
                              py::array(py::cast(vals)));
      },
      py::arg("c"), py::arg("r"),
      "Operator -div((rI + C) grad) as COO arrays (rows, cols, values) over row-major cells.");

  m.def(
      "solve_pressure",
      [](const Array& c, double r, const Array& source) {
        const TensorField tc = to_tensor(c);
        const ScalarField s = to_scalar(source);
        py::gil_scoped_release release;
        ScalarField p = solve_pressure(assemble(tc, r), s);
        py::gil_scoped_acquire acquire;
        return from_scalar(p);
      },
      py::arg("c"), py::arg("r"), py::arg("source"), "Zero-mean pressure for a zero-sum source.");

  m.def(
      "condition_number",
      [](const Array& c, double r) {
        const ConditionEstimate e = condition_number(assemble(to_tensor(c), r));
        py::dict d;
        d["value"] = e.value;
        d["sigma_max"] = e.sigma_max;
        d["sigma_min"] = e.sigma_min;
        return d;
      },
      py::arg("c"), py::arg("r"));

  m.def(
      "asymmetry", [](const Array& a) { return asymmetry(to_scalar(a)); }, py::arg("field"));
  m.def(
      "asymmetry_tensor", [](const Array& c) { return asymmetry_tensor(to_tensor(c)); },
      py::arg("c"));

  m.def(
      "energy",
      [](const Array& c, const ModelParams& params, const Array& source) {
        return energy(to_tensor(c), params, to_scalar(source));
      },
      py::arg("c"), py::arg("params"), py::arg("source"));

  m.def(
      "flux_magnitude",
      [](const Array& c, const Array& p, bool include_r, double r) {
        return from_scalar(flux_magnitude(to_tensor(c), to_scalar(p), include_r, r));
      },
      py::arg("c"), py::arg("p"), py::arg("include_r") = false, py::arg("r") = 0.0);

  m.def(
      "principal_eigen",
      [](double c11, double c12, double c22) {
        const CellEigen e = principal_eigen(c11, c12, c22);
        return py::make_tuple(e.lambda1, e.lambda2, e.vx, e.vy);
      },
      py::arg("c11"), py::arg("c12"), py::arg("c22"),
      "(lambda1, lambda2, vx, vy) with |lambda1| >= |lambda2|.");

  m.def(
      "wasserstein_1d",
      [](std::vector<double> xs, std::vector<double> xw, std::vector<double> ys,
         std::vector<double> yw, double p) {
        return wasserstein_1d({std::move(xs), std::move(xw)}, {std::move(ys), std::move(yw)}, p);
      },
      py::arg("support_a"), py::arg("weights_a"), py::arg("support_b"), py::arg("weights_b"),
      py::arg("p") = 1.0);

  m.def(
      "error_wasserstein",
      [](const Array& coarse, const Array& fine, double p, bool sliced) {
        WassersteinOptions o;
        o.p = p;
        o.embedding = sliced ? Embedding::Sliced : Embedding::RowMajor;
        return error_wasserstein(to_tensor(coarse), to_tensor(fine), o);
      },
      py::arg("coarse"), py::arg("fine"), py::arg("p") = 1.0, py::arg("sliced") = false);

  m.def(
      "error_richardson",
      [](const Array& coarse, const Array& fine) {
        return error_richardson(to_tensor(coarse), to_tensor(fine));
      },
      py::arg("coarse"), py::arg("fine"));

  m.def(
      "parse_config", [](const std::string& text) { return to_config_text(parse_config(text)); },
      py::arg("text"), "Validates configuration text and returns its canonical form.");

  m.def(
      "simulate",
      [](const std::string& config_text) {
        const RunConfig config = parse_config(config_text);
        config.validate();
        RunOptions options;
        options.diagnostics_every = config.diagnostics_every;
        options.condition_every = config.cond_every;
        options.solver.kind = config.solver;
        RunResult result = [&] {
          py::gil_scoped_release release;
          return run(config.params, config.scheme, config.n, config.ic, config.source, options);
        }();
        py::list diagnostics;
        for (const DiagnosticsRecord& r : result.diagnostics) diagnostics.append(record_dict(r));
        py::dict out;
        out["c"] = from_tensor(result.final_state.c_now);
        out["p"] = from_scalar(result.final_state.p_half);
        out["steps"] = result.final_state.step;
        out["diagnostics"] = diagnostics;
        return out;
      },
      py::arg("config") = "",
      "Runs a configuration (same text format as the CLI) and returns the final state.");
}
