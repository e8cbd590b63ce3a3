#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "curvlab/bochner.hpp"
#include "curvlab/catalog.hpp"
#include "curvlab/curvature.hpp"
#include "curvlab/error.hpp"
#include "curvlab/suite.hpp"

namespace py = pybind11;
using namespace curvlab;

namespace {

// Dense components as an ndarray of shape (dim,) * rank.
py::array_t<double> to_array(const Tensor& t) {
  std::vector<py::ssize_t> shape(static_cast<std::size_t>(t.rank()), t.dim());
  py::array_t<double> out(shape);
  std::copy(t.data().begin(), t.data().end(), out.mutable_data());
  return out;
}

std::vector<double> checked_point(const CatalogSpace& s, const std::vector<double>& p) {
  if (static_cast<int>(p.size()) != s.n) throw Error(ErrorKind::InvalidArgument, "point has the wrong dimension");
  s.chart.require_interior(p);
  return p;
}

py::dict report_dict(const ResidualReport& r) {
  py::dict d;
  d["space"] = r.space;
  d["n"] = r.n;
  d["params"] = r.params;
  d["check"] = r.check;
  d["grid"] = r.grid;
  d["fd_step"] = r.fd_step;
  d["points"] = r.points;
  d["max_abs"] = r.max_abs;
  d["mean_abs"] = r.mean_abs;
  d["max_rel"] = r.max_rel;
  d["tolerance"] = r.tolerance;
  d["abs_floor"] = r.abs_floor;
  d["min_value"] = r.min_value;
  d["max_value"] = r.max_value;
  d["pass"] = r.pass;
  d["runtime_ms"] = r.runtime_ms;
  py::dict extra;
  for (const auto& [k, v] : r.extra) extra[py::str(k)] = v;
  d["extra"] = extra;
  return d;
}

}  // namespace

PYBIND11_MODULE(_curvlab, m) {
  m.doc() = "Numerical curvature engine for catalog V-static spaces";

  // Message starts with the error kind, e.g. "InadmissibleMass: ...".
  py::register_exception<Error>(m, "CurvlabError", PyExc_RuntimeError);

  m.def("spaces", [] {
    std::vector<std::string> out;
    for (CatalogId id : all_catalog_ids()) out.emplace_back(to_string(id));
    return out;
  });
  m.def("checks", [] {
    std::vector<std::string> out;
    for (const CheckSpec& c : check_registry()) out.emplace_back(c.id);
    return out;
  });

  py::class_<CatalogSpace>(m, "Space")
      .def_property_readonly("id", [](const CatalogSpace& s) { return std::string(to_string(s.id)); })
      .def_readonly("n", &CatalogSpace::n)
      .def_readonly("params", &CatalogSpace::params)
      .def_property_readonly("coords", [](const CatalogSpace& s) { return s.chart.coords(); })
      .def_property_readonly("domain",
                             [](const CatalogSpace& s) {
                               std::vector<std::pair<double, double>> out;
                               for (const Interval& i : s.chart.domain()) out.emplace_back(i.lo, i.hi);
                               return out;
                             })
      .def_readonly("roots", &CatalogSpace::roots)
      .def_property_readonly("has_triple", [](const CatalogSpace& s) { return s.triple.has_value(); })
      .def("sample_points",
           [](const CatalogSpace& s, int radial, int fiber) { return SampleGrid::uniform(s.chart, radial, fiber).points(); },
           py::arg("radial") = 8, py::arg("fiber") = 2)
      .def("metric", [](const CatalogSpace& s, const std::vector<double>& p) {
        return to_array(metric_at(s.chart, checked_point(s, p)));
      })
      .def("riemann", [](const CatalogSpace& s, const std::vector<double>& p) {
        return to_array(riemann(s.chart, checked_point(s, p)));
      })
      .def("ricci", [](const CatalogSpace& s, const std::vector<double>& p) {
        return to_array(ricci(s.chart, checked_point(s, p)));
      })
      .def("scalar_curvature", [](const CatalogSpace& s, const std::vector<double>& p) {
        return scalar_curvature(s.chart, checked_point(s, p));
      })
      .def("potential", [](const CatalogSpace& s, const std::vector<double>& p) {
        return s.require_triple().potential.f(checked_point(s, p));
      })
      .def("with_fd", [](const CatalogSpace& s, std::optional<double> step, std::optional<int> levels) {
        return with_fd(s, step, levels);
      }, py::arg("step") = py::none(), py::arg("levels") = py::none());

  m.def(
      "build",
      [](const std::string& id, int n, const CatalogParams& params, bool load_check) {
        return build(std::string_view(id), n, params, load_check ? LoadCheck::Sampled : LoadCheck::None);
      },
      py::arg("id"), py::arg("n"), py::arg("params") = CatalogParams{}, py::arg("load_check") = true);

  m.def("schwarzschild_mass_bound", &schwarzschild_mass_bound, py::arg("n"));
  m.def("schwarzschild_roots", &schwarzschild_roots, py::arg("n"), py::arg("m"));

  m.def(
      "run_checks",
      [](const CatalogSpace& s, const std::string& checks, std::optional<std::pair<int, int>> grid,
         std::optional<double> fd_step, std::optional<int> fd_levels, const std::string& backend, int threads) {
        RunOptions o;
        if (grid) o.grid = GridSpec{grid->first, grid->second};
        o.fd_step = fd_step;
        o.fd_levels = fd_levels;
        o.backend = parse_backend(backend);
        o.threads = threads;
        const std::vector<std::string> ids = expand_check_list(checks);
        std::vector<ResidualReport> reports;
        {
          py::gil_scoped_release release;
          reports = run_checks(s, ids, o);
        }
        py::list out;
        for (const ResidualReport& r : reports) out.append(report_dict(r));
        return out;
      },
      py::arg("space"), py::arg("checks"), py::arg("grid") = py::none(), py::arg("fd_step") = py::none(),
      py::arg("fd_levels") = py::none(), py::arg("backend") = "chart", py::arg("threads") = 1);

  m.def(
      "integrate",
      [](const CatalogSpace& s, const std::string& integrand, int order) {
        RadialQuadratureOptions o;
        o.order = order;
        const RadialIntegral r = integrate_radial(s.require_triple(), parse_radial_integrand(integrand), o);
        py::dict d;
        d["value"] = r.value;
        d["abs_integral"] = r.abs_integral;
        d["numerical_error"] = r.numerical_error();
        d["vanishes"] = r.vanishes();
        return d;
      },
      py::arg("space"), py::arg("integrand"), py::arg("order") = kDefaultQuadratureOrder);
}
