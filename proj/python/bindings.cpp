#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <utility>
#include <vector>

#include "tubehs/carleson.hpp"
#include "tubehs/config.hpp"
#include "tubehs/decomposition.hpp"
#include "tubehs/error.hpp"
#include "tubehs/kernels.hpp"
#include "tubehs/operators.hpp"
#include "tubehs/verify.hpp"

namespace py = pybind11;
using namespace tubehs;

namespace {

// Configs cross the boundary as JSON text; the Python wrapper serializes dicts.
json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigInvalid, e.what());
  }
}

using Point = std::pair<std::vector<double>, std::vector<double>>;

TubePoint to_point(const Cone& cone, const Point& p) {
  const auto& [x, y] = p;
  if (static_cast<int>(x.size()) != cone.dim() || static_cast<int>(y.size()) != cone.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "point dimension does not match cone");
  }
  return make_tube_point(cone, Eigen::Map<const Vec>(x.data(), cone.dim()), Eigen::Map<const Vec>(y.data(), cone.dim()));
}

Weight weight_of(const Cone& cone, int order, const std::string& gauge) {
  return Weight(order, gauge.empty() ? Gauge::euclidean(cone) : parse_gauge(parse(gauge), cone));
}

py::dict criterion_dict(const CriterionResult& r) {
  py::dict d;
  d["id"] = r.id;
  d["name"] = r.name;
  d["passed"] = r.passed;
  d["measured"] = r.measured;
  d["threshold"] = r.threshold;
  d["seconds"] = r.seconds;
  d["detail"] = r.detail;
  return d;
}

}  // namespace

PYBIND11_MODULE(_tubehs, m) {
  m.doc() = "Hardy-Sobolev spaces on tube domains over convex cones";

  // Module-lifetime reference; translators cannot capture.
  static PyObject* error_type = nullptr;
  error_type = PyErr_NewException("tubehs._tubehs.TubeHSError", PyExc_RuntimeError, nullptr);
  m.add_object("TubeHSError", py::handle(error_type));
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object value = py::reinterpret_steal<py::object>(PyObject_CallFunction(error_type, "s", e.what()));
      value.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error_type, value.ptr());
    }
  });

  py::class_<Cone>(m, "Cone")
      .def(py::init([](const std::string& spec) { return parse_cone(parse(spec)); }), py::arg("spec"))
      .def_property_readonly("dim", &Cone::dim)
      .def("to_json", [](const Cone& c) { return cone_to_json(c).dump(); })
      .def("contains_dual", [](const Cone& c, const std::vector<double>& xi) {
        return contains_dual(c, Eigen::Map<const Vec>(xi.data(), static_cast<Eigen::Index>(xi.size())));
      })
      .def("interior_depth", [](const Cone& c, const std::vector<double>& y) {
        return interior_depth(c, Eigen::Map<const Vec>(y.data(), static_cast<Eigen::Index>(y.size())));
      });

  m.def("kernel", [](const Cone& c, int order, const Point& z, const Point& w, const std::string& gauge) {
    return kernel_eval(KernelParams(weight_of(c, order, gauge)), to_point(c, z), to_point(c, w));
  }, py::arg("cone"), py::arg("order"), py::arg("z"), py::arg("w"), py::arg("gauge") = "");

  m.def("kernel_diag", [](const Cone& c, int order, const Point& z, const std::string& gauge) {
    return kernel_diag(KernelParams(weight_of(c, order, gauge)), to_point(c, z));
  }, py::arg("cone"), py::arg("order"), py::arg("z"), py::arg("gauge") = "");

  m.def("evaluate", [](const Cone& c, int order, const std::string& density, const Point& z, const std::string& gauge) {
    const HSFunction f(parse_density(parse(density), c), weight_of(c, order, gauge));
    return evaluate(f, to_point(c, z));
  }, py::arg("cone"), py::arg("order"), py::arg("density"), py::arg("z"), py::arg("gauge") = "");

  m.def("hs_norm", [](const Cone& c, int order, const std::string& density, const std::string& gauge) {
    return hs_norm(HSFunction(parse_density(parse(density), c), weight_of(c, order, gauge)));
  }, py::arg("cone"), py::arg("order"), py::arg("density"), py::arg("gauge") = "");

  m.def("decompose", [](const Cone& c, int order, const std::string& grid, const std::string& gauge, double tol) {
    const NormReport r = norm_identity_report(parse_grid(parse(grid)), c, weight_of(c, order, gauge), tol);
    py::dict d;
    d["boundary_norm_sq"] = r.boundary_norm_sq;
    d["plus_norm_sq"] = r.plus_norm_sq;
    d["minus_norm_sq"] = r.minus_norm_sq;
    d["defect"] = r.defect;
    d["residual_mass"] = r.residual_mass;
    return d;
  }, py::arg("cone"), py::arg("order"), py::arg("grid"), py::arg("gauge") = "", py::arg("tol") = 0.0);

  m.def("embedding_estimate", [](const Cone& c, int order, const std::string& measure, const std::vector<Point>& frame) {
    std::vector<TubePoint> pts;
    for (const Point& p : frame) pts.push_back(to_point(c, p));
    const EmbeddingEstimate e = embedding_estimate(KernelParams(weight_of(c, order, "")), parse_measure(parse(measure), c), pts);
    return py::make_tuple(e.lambda, e.condition);
  }, py::arg("cone"), py::arg("order"), py::arg("measure"), py::arg("frame"));

  m.def("run_criterion", [](int id, std::uint64_t seed) {
    CriterionResult r;
    {
      py::gil_scoped_release release;
      r = run_criterion(id, seed);
    }
    return criterion_dict(r);
  }, py::arg("id"), py::arg("seed") = kDefaultSeed);

  m.attr("criterion_count") = kCriterionCount;
  m.attr("default_seed") = kDefaultSeed;
}
