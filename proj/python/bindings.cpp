#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "flutter/acoustic.hpp"
#include "flutter/constitutive.hpp"
#include "flutter/errors.hpp"
#include "flutter/field.hpp"
#include "flutter/greens.hpp"
#include "flutter/specfun.hpp"

namespace py = pybind11;
using namespace flutter;

namespace {

GreensEvalConfig eval_config(double omega_bar, double rel_tol) {
  GreensEvalConfig c;
  c.omega_bar = omega_bar;
  c.quad_rel_tol = rel_tol;
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Flutter instability and time-harmonic Green's tensor of nonassociative elastoplastic solids";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<MaterialState>(m, "MaterialState")
      .def(py::init<>())
      .def_property("lambda_over_mu", [](const MaterialState& s) { return s.elastic.lambda_over_mu; },
                    [](MaterialState& s, double v) { s.elastic.lambda_over_mu = v; })
      .def_property("b_hat_deg", [](const MaterialState& s) { return s.elastic.b_hat_deg; },
                    [](MaterialState& s, double v) { s.elastic.b_hat_deg = v; })
      .def_property("theta_sigma_deg", [](const MaterialState& s) { return s.elastic.theta_sigma_deg; },
                    [](MaterialState& s, double v) { s.elastic.theta_sigma_deg = v; })
      .def_property("H_over_mu", [](const MaterialState& s) { return s.plastic.H_over_mu; },
                    [](MaterialState& s, double v) { s.plastic.H_over_mu = v; })
      .def_property("psi_deg", [](const MaterialState& s) { return s.plastic.psi_deg; },
                    [](MaterialState& s, double v) { s.plastic.psi_deg = v; })
      .def_property("chi_deg", [](const MaterialState& s) { return s.plastic.chi_deg; },
                    [](MaterialState& s, double v) { s.plastic.chi_deg = v; })
      .def_property("theta_L_deg", [](const MaterialState& s) { return s.stress.theta_L_deg; },
                    [](MaterialState& s, double v) { s.stress = dev_direction_from_lode(v); })
      .def("__repr__", [](const MaterialState& s) {
        return "MaterialState(H_over_mu=" + std::to_string(s.plastic.H_over_mu) +
               ", theta_L_deg=" + std::to_string(s.stress.theta_L_deg) +
               ", theta_sigma_deg=" + std::to_string(s.elastic.theta_sigma_deg) + ")";
      });

  m.def("reference_case", &reference_case, py::arg("case_number"), py::arg("H_over_mu") = 1.0);

  m.def(
      "thresholds",
      [](const MaterialState& s) {
        const auto pd = pd_threshold(s);
        const auto e = ellipticity_threshold(s);
        py::dict d;
        d["H_PD_over_mu"] = pd.lost ? py::object(py::float_(pd.H_cr)) : py::none();
        d["H_E_over_mu"] = e.lost ? py::object(py::float_(e.H_cr)) : py::none();
        d["theta_nE_deg"] = e.lost ? py::object(py::float_(e.theta_nE_deg)) : py::none();
        return d;
      },
      py::arg("state"));

  m.def(
      "flutter_fans",
      [](const MaterialState& s, double resolution_deg) {
        std::vector<std::pair<double, double>> out;
        for (const auto& f : flutter_fans(s, resolution_deg)) out.emplace_back(f.lo_deg, f.hi_deg);
        return out;
      },
      py::arg("state"), py::arg("resolution_deg") = 0.05);

  m.def(
      "acoustic_spectrum",
      [](const MaterialState& s, double theta_n_deg) {
        const auto sp = spectrum(build_acoustic(direction(theta_n_deg), s));
        return std::pair{sp.c1_sq, sp.c2_sq};
      },
      py::arg("state"), py::arg("theta_n_deg"));

  m.def(
      "cisi",
      [](cplx z) {
        const auto r = cisi(z);
        return std::pair{r.ci, r.si};
      },
      py::arg("z"));

  m.def("planewave_bracket", &planewave_bracket, py::arg("xi"), py::arg("k"));

  m.def(
      "greens_at",
      [](double x1, double x2, const MaterialState& s, double omega_bar, double rel_tol) {
        return Eigen::Matrix2cd(greens_at({x1, x2}, s, eval_config(omega_bar, rel_tol)).g);
      },
      py::arg("x1"), py::arg("x2"), py::arg("state"), py::arg("omega_bar") = 1.0, py::arg("rel_tol") = 1e-8);

  m.def(
      "sample_grid",
      [](const MaterialState& s, double extent, int n, double beta_deg, double omega_bar) {
        GridSpec g;
        g.x1_min = g.x2_min = -extent;
        g.x1_max = g.x2_max = extent;
        g.n1 = g.n2 = n;
        Dipole d;
        d.beta_deg = beta_deg;
        FieldMap map;
        {
          py::gil_scoped_release release;
          map = sample_grid(d, s, eval_config(omega_bar, 1e-8), g);
        }
        py::array_t<cplx> u({n, n, 2});
        auto view = u.mutable_unchecked<3>();
        for (int j = 0; j < n; ++j)
          for (int i = 0; i < n; ++i) {
            const auto c = map.index(i, j);
            const cplx nan(std::numeric_limits<double>::quiet_NaN(), 0.0);
            view(j, i, 0) = map.masked[c] ? nan : map.u[c](0);
            view(j, i, 1) = map.masked[c] ? nan : map.u[c](1);
          }
        return u;
      },
      py::arg("state"), py::arg("extent") = 25.0, py::arg("n") = 128, py::arg("beta_deg") = 45.0,
      py::arg("omega_bar") = 1.0,
      "Dipole displacement on an n x n grid over [-extent, extent]^2; array[j, i, component], "
      "row j at x2(j). Masked cells are NaN.");
}
