#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "lri/diagnostics.hpp"
#include "lri/experiments.hpp"
#include "lri/expops.hpp"
#include "lri/grid.hpp"
#include "lri/potential.hpp"
#include "lri/schemes.hpp"

namespace py = pybind11;
using namespace lri;

namespace {

Bc parse_bc(const std::string& s) {
  if (s == "neumann") return Bc::Neumann;
  if (s == "periodic") return Bc::Periodic;
  throw std::invalid_argument("bc must be 'neumann' or 'periodic'");
}

TransformPath parse_path(const std::string& s) {
  if (s == "auto") return TransformPath::Auto;
  if (s == "matrix") return TransformPath::Matrix;
  if (s == "fft") return TransformPath::Fft;
  throw std::invalid_argument("path must be 'auto', 'matrix' or 'fft'");
}

SchemeKind parse_scheme_py(const std::string& s) {
  auto k = parse_scheme(s);
  if (!k) throw std::invalid_argument("unknown scheme: " + s);
  return *k;
}

py::array_t<double> field_to_array(const Field& f) {
  std::vector<py::ssize_t> shape;
  for (int a = 0; a < f.grid.dim; ++a) shape.push_back(f.grid.n[a]);
  py::array_t<double> arr(shape);
  std::copy(f.values.begin(), f.values.end(), arr.mutable_data());
  return arr;
}

Field array_to_field(const GridSpec& g, const py::array_t<double>& arr) {
  auto buf = py::array_t<double, py::array::c_style | py::array::forcecast>(arr);
  if (buf.size() != g.total())
    throw std::invalid_argument("array size does not match grid");
  Field f = Field::zeros(g);
  std::copy(buf.data(), buf.data() + buf.size(), f.values.begin());
  return f;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Low regularity and exponential integrators for Allen-Cahn type "
            "equations: tensor-grid operators, MBP bounds, steppers and the "
            "two reference experiments.";

  py::class_<GridSpec>(m, "Grid")
      .def(py::init([](int dim, int n, double length, const std::string& bc) {
             return GridSpec::make(dim, {n, n, n}, {length, length, length},
                                   parse_bc(bc));
           }),
           py::arg("dim"), py::arg("n"), py::arg("length") = 1.0,
           py::arg("bc") = "neumann")
      .def_static(
          "from_spacing",
          [](int dim, double length, double h, const std::string& bc) {
            return GridSpec::from_spacing(dim, length, h, parse_bc(bc));
          },
          py::arg("dim"), py::arg("length"), py::arg("h"), py::arg("bc"))
      .def_readonly("dim", &GridSpec::dim)
      .def_property_readonly("n", [](const GridSpec& g) {
        std::vector<int> out(g.n.begin(), g.n.begin() + g.dim);
        return out;
      })
      .def_property_readonly("h", [](const GridSpec& g) {
        std::vector<double> out(g.h.begin(), g.h.begin() + g.dim);
        return out;
      })
      .def_property_readonly("bc", [](const GridSpec& g) {
        return std::string(bc_name(g.bc));
      })
      .def("total", &GridSpec::total);

  py::class_<Potential>(m, "Potential")
      .def_readonly("name", &Potential::name)
      .def_readonly("beta", &Potential::beta)
      .def("f", [](const Potential& p, double x) { return p.f(x); })
      .def("df", [](const Potential& p, double x) { return p.df(x); })
      .def("F", [](const Potential& p, double x) { return p.F(x); });

  m.def("double_well", &double_well);
  m.def("flory_huggins", &flory_huggins, py::arg("theta"), py::arg("theta_c"));

  py::class_<StabilityBounds>(m, "StabilityBounds")
      .def_readonly("beta", &StabilityBounds::beta)
      .def_readonly("omega0", &StabilityBounds::omega0)
      .def_readonly("omega1", &StabilityBounds::omega1)
      .def_readonly("delta", &StabilityBounds::delta)
      .def_readonly("delta0", &StabilityBounds::delta0)
      .def_readonly("endpoint_roots", &StabilityBounds::endpoint_roots)
      .def_readonly("dt_max_first", &StabilityBounds::dt_max_first)
      .def_readonly("dt_max_second", &StabilityBounds::dt_max_second)
      .def_readonly("dt_max_second_generic", &StabilityBounds::dt_max_second_generic)
      .def_readonly("F0", &StabilityBounds::F0)
      .def_readonly("F1", &StabilityBounds::F1)
      .def_readonly("F2", &StabilityBounds::F2)
      .def_readonly("F3", &StabilityBounds::F3)
      .def_readonly("F4", &StabilityBounds::F4);

  m.def("compute_bounds", &compute_bounds);
  m.def("stabilized_map", &stabilized_map, py::arg("potential"), py::arg("bounds"),
        py::arg("omega"), py::arg("x"));
  m.def("phi", &phi_scalar, py::arg("k"), py::arg("z"));

  py::class_<Propagator>(m, "Propagator")
      .def(py::init([](const GridSpec& g, double eps, double t,
                       const std::string& path, bool with_phi) {
             return Propagator(g, make_axes(g), eps, t, parse_path(path), with_phi);
           }),
           py::arg("grid"), py::arg("eps"), py::arg("t"), py::arg("path") = "auto",
           py::arg("with_phi") = true)
      .def("apply_exp",
           [](const Propagator& p, const py::array_t<double>& u) {
             return field_to_array(p.apply_exp(array_to_field(p.grid(), u)));
           })
      .def("apply_phi", [](const Propagator& p, int k, const py::array_t<double>& u) {
        return field_to_array(p.apply_phi(k, array_to_field(p.grid(), u)));
      });

  py::class_<Stepper>(m, "Stepper")
      .def(py::init([](const GridSpec& g, double eps, double dt,
                       const std::string& scheme, const Potential& pot,
                       const std::string& path) {
             return Stepper(g, make_axes(g), eps, dt, parse_scheme_py(scheme), pot,
                            parse_path(path));
           }),
           py::arg("grid"), py::arg("eps"), py::arg("dt"), py::arg("scheme"),
           py::arg("potential"), py::arg("path") = "auto")
      .def("step",
           [](const Stepper& s, const py::array_t<double>& u) {
             return field_to_array(s.step(array_to_field(s.grid(), u)));
           })
      .def("integrate", [](const Stepper& s, const py::array_t<double>& u0,
                           long steps) {
        IntegrationResult r = integrate(s, array_to_field(s.grid(), u0), steps);
        py::dict out;
        out["final"] = field_to_array(r.final);
        out["steps_completed"] = r.steps_completed;
        out["divergence_step"] =
            r.divergence_step ? py::cast(*r.divergence_step) : py::none();
        return out;
      });

  m.def("apply_laplacian", [](const GridSpec& g, const py::array_t<double>& u) {
    return field_to_array(apply_laplacian(array_to_field(g, u)));
  });
  m.def("operator_inf_norm", &operator_inf_norm, py::arg("grid"), py::arg("eps"));
  m.def("dense_laplacian_1d",
        [](int n, double h, const std::string& bc) {
          return dense_laplacian_1d(n, h, parse_bc(bc));
        },
        py::arg("n"), py::arg("h"), py::arg("bc") = "neumann");

  m.def("discrete_energy", [](const GridSpec& g, const py::array_t<double>& u,
                              double eps, const Potential& pot) {
    return discrete_energy(array_to_field(g, u), eps, pot);
  });
  m.def("error_norms", [](const GridSpec& g, const py::array_t<double>& u,
                          const py::array_t<double>& v) {
    ErrorNorms n = error_norms(array_to_field(g, u), array_to_field(g, v));
    return py::make_tuple(n.l2, n.linf);
  });
  m.def("convergence_rates", [](const std::vector<double>& errors,
                                const std::vector<double>& dts) {
    return convergence_rates(errors, dts);
  });

  m.def("traveling_wave", [](const GridSpec& g, double eps, double t) {
    return field_to_array(traveling_wave_field(g, eps, t));
  });
  m.def("random_field", [](const GridSpec& g, double lo, double hi, uint64_t seed) {
    return field_to_array(random_field(g, lo, hi, seed));
  });

  m.def(
      "run_convergence",
      [](double eps, int h_denom, const std::vector<std::string>& schemes,
         const std::vector<int>& divisors, int jobs) {
        WaveConfig c;
        c.eps = eps;
        c.h_denom = h_denom;
        if (!schemes.empty()) {
          c.schemes.clear();
          for (const auto& s : schemes) c.schemes.push_back(parse_scheme_py(s));
        }
        if (!divisors.empty()) c.dt_divisors = divisors;
        c.jobs = jobs;
        py::list rows;
        for (const ConvergenceRow& r : run_convergence(c).rows) {
          py::dict d;
          d["scheme"] = std::string(scheme_name(r.scheme));
          d["dt"] = r.dt;
          d["l2_error"] = r.l2_error;
          d["l2_rate"] = r.l2_rate;
          d["linf_error"] = r.linf_error;
          d["linf_rate"] = r.linf_rate;
          d["diverged"] = r.diverged;
          rows.append(d);
        }
        return rows;
      },
      py::arg("eps") = 0.02, py::arg("h_denom") = 256,
      py::arg("schemes") = std::vector<std::string>{},
      py::arg("divisors") = std::vector<int>{}, py::arg("jobs") = 1);

  m.def(
      "run_coarsening",
      [](const std::string& potential, double eps, int h_denom,
         const std::string& scheme, double dt, double T, uint64_t seed,
         double init_lo, double init_hi, const std::vector<double>& snapshot_times,
         double theta, double theta_c) {
        CoarsenConfig c;
        c.potential = potential;
        c.eps = eps;
        c.h_denom = h_denom;
        c.scheme = parse_scheme_py(scheme);
        c.dt = dt;
        c.T = T;
        c.seed = seed;
        c.init_lo = init_lo;
        c.init_hi = init_hi;
        c.snapshot_times = snapshot_times;
        c.theta = theta;
        c.theta_c = theta_c;
        RunReport r = run_coarsening(c);
        py::dict out;
        out["sup_series"] = r.sup_series;
        out["energy_series"] = r.energy_series;
        out["final"] = field_to_array(r.final);
        out["beta"] = r.beta;
        out["steps_completed"] = r.steps_completed;
        out["divergence_step"] =
            r.divergence_step ? py::cast(*r.divergence_step) : py::none();
        out["mbp_violation_step"] =
            r.mbp_violation_step ? py::cast(*r.mbp_violation_step) : py::none();
        py::list snaps;
        for (const Snapshot& s : r.snapshots) {
          py::dict d;
          d["requested_time"] = s.requested_time;
          d["realized_time"] = s.realized_time;
          d["step"] = s.step;
          d["field"] = field_to_array(s.field);
          snaps.append(d);
        }
        out["snapshots"] = snaps;
        return out;
      },
      py::arg("potential") = "double-well", py::arg("eps") = 0.01,
      py::arg("h_denom") = 128, py::arg("scheme") = "lri1a", py::arg("dt") = 0.5,
      py::arg("T") = 50.0, py::arg("seed") = 2024, py::arg("init_lo") = -1.0,
      py::arg("init_hi") = 1.0,
      py::arg("snapshot_times") = std::vector<double>{}, py::arg("theta") = 0.8,
      py::arg("theta_c") = 1.6);
}
