#include <doctest.h>

#include "support.hpp"
#include "tubehs/config.hpp"
#include "tubehs/error.hpp"

using namespace tubehs;
using namespace tt;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("cones parse and round trip") {
  const Cone o = parse_cone(json::parse(R"({"kind": "orthant", "dim": 2})"));
  CHECK(o.kind() == ConeKind::Orthant);
  CHECK(o.dim() == 2);
  const Cone l = parse_cone(json::parse(R"({"kind": "lorentz", "dim": 3})"));
  CHECK(l.kind() == ConeKind::Lorentz);
  const Cone s = parse_cone(json::parse(R"({"kind": "simplicial", "dim": 2, "generators": [[1, 0], [1, 1]]})"));
  CHECK(s.generators()(0, 1) == 1.0);
  CHECK(s.generators()(1, 1) == 1.0);
  CHECK(s.generators()(1, 0) == 0.0);
  const Cone back = parse_cone(cone_to_json(s));
  CHECK(back.generators() == s.generators());

  CHECK(code_of([] { parse_cone(json::parse(R"({"kind": "cube", "dim": 2})")); }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([] { parse_cone(json::parse(R"({"dim": 2})")); }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([] { parse_cone(json::parse(R"({"kind": "orthant", "dim": "two"})")); }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([] { parse_cone(json::parse(R"({"kind": "simplicial", "dim": 2, "generators": [[1, 0]]})")); }) ==
        ErrorCode::ConfigInvalid);
  CHECK(code_of([] { parse_cone(json::parse(R"({"kind": "simplicial", "dim": 2, "generators": [[1, 1], [2, 2]]})")); }) ==
        ErrorCode::SingularGenerators);
  CHECK(code_of([] { parse_cone(json::parse(R"({"kind": "lorentz", "dim": 5})")); }) == ErrorCode::UnsupportedDimension);
}

TEST_CASE("scalars, vectors and points") {
  CHECK(parse_complex(json(2.5)) == Complex(2.5, 0.0));
  CHECK(parse_complex(json::parse("[1, -2]")) == Complex(1.0, -2.0));
  CHECK(parse_complex(json::parse(R"({"re": 0.5, "im": 3})")) == Complex(0.5, 3.0));
  CHECK(code_of([] { parse_complex(json("x")); }) == ErrorCode::ConfigInvalid);
  CHECK(complex_to_json(Complex(1, 2)) == json::parse("[1.0, 2.0]"));
  CHECK(code_of([] { parse_vec(json::parse("[1, 2, 3]"), 2, "v"); }) == ErrorCode::ConfigInvalid);

  const Cone c = Cone::orthant(1);
  const TubePoint z = parse_point(json::parse(R"({"x": [0.5], "y": [2]})"), c);
  CHECK(z.x[0] == 0.5);
  CHECK(z.y[0] == 2.0);
  CHECK(code_of([&] { parse_point(json::parse(R"({"x": [0], "y": [-1]})"), c); }) == ErrorCode::NotInInterior);
  CHECK(parse_points(json::parse(R"([{"x": [0], "y": [1]}, {"x": [1], "y": [1]}])"), c).size() == 2);
}

TEST_CASE("gauges and densities") {
  const Cone c = Cone::orthant(2);
  CHECK(gauge_eval(parse_gauge(json::parse(R"({"kind": "linear", "direction": [1, 1]})"), c), v2(1, 1)) == 2.0);
  CHECK(code_of([&] { parse_gauge(json::parse(R"({"kind": "sup"})"), c); }) == ErrorCode::ConfigInvalid);

  const SpectralDensity e = parse_density(json::parse(R"({"kind": "exponential", "rate": [1, 2], "amplitude": [0, 1]})"), c);
  CHECK(rel(e.value(v2(1, 1)), Complex(0, 1) * std::exp(-3.0)) <= 1e-15);
  const SpectralDensity p = parse_density(
      json::parse(R"({"kind": "poly_exponential", "rate": [1, 1], "terms": [{"alpha": [1, 0], "coeff": 2}]})"), c);
  CHECK(rel(p.value(v2(0.5, 0.0)), 2.0 * 0.5 * std::exp(-0.5)) <= 1e-15);
  const SpectralDensity t = parse_density(json::parse(R"({"kind": "truncated_indicator", "radius": 2})"), c);
  CHECK(t.value(v2(1, 1)) == Complex(1.0));
  CHECK(t.value(v2(3, 1)) == Complex(0.0));
  const SpectralDensity s = parse_density(json::parse(R"({"kind": "exponential", "rate": [1, 1], "shift": [1, 0]})"), c);
  CHECK(rel(s.value(v2(1.5, 0.5)), std::exp(-1.0)) <= 1e-15);
  CHECK(code_of([&] { parse_density(json::parse(R"({"kind": "exponential", "rate": [1, 1], "shift": [-1, 0]})"), c); }) ==
        ErrorCode::OutsideDualCone);
  CHECK(code_of([&] { parse_density(json::parse(R"({"kind": "gaussian"})"), c); }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([&] { parse_polynomial(json::parse(R"([{"alpha": [-1, 0], "coeff": 1}])"), 2); }) == ErrorCode::ConfigInvalid);
}

TEST_CASE("measures") {
  const Cone c = Cone::orthant(1);
  const DiscreteMeasure mu = parse_measure(json::parse(R"([{"x": [0], "y": [1], "mass": 0.5}])"), c);
  CHECK(mu.size() == 1);
  CHECK(mu.masses[0] == 0.5);
  CHECK_THROWS_AS(parse_measure(json::parse(R"([{"x": [0], "y": [1], "mass": -1}])"), c), Error);
  CHECK(code_of([&] { parse_measure(json::parse(R"([{"x": [0], "y": [1]}])"), c); }) == ErrorCode::ConfigInvalid);
}

TEST_CASE("grids from JSON and CSV") {
  const BoundaryGrid g = parse_grid(json::parse(R"({"dim": 1, "points_per_axis": 4, "period": 6.0,
                                                    "samples": [1, [0, 1], -1, [0, -1]]})"));
  CHECK(g.samples[1] == Complex(0.0, 1.0));
  CHECK(code_of([] { parse_grid(json::parse(R"({"dim": 1, "points_per_axis": 4, "period": 1, "samples": [1, 2]})")); }) ==
        ErrorCode::InvalidArgument);

  const BoundaryGrid h = parse_grid_csv("index,re,im\n3,0,-1\n0,1,0\n2,-1,0\n1,0,1\n", 1, 4, 6.0);
  CHECK(h.samples == g.samples);
  CHECK(code_of([] { parse_grid_csv("0,1,0\n0,1,0\n1,0,0\n2,0,0\n", 1, 4, 1.0); }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([] { parse_grid_csv("0,1,0\n1,0,0\n", 1, 4, 1.0); }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([] { parse_grid_csv("0,1,0\n1,x,0\n2,0,0\n3,0,0\n", 1, 4, 1.0); }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([] { parse_grid_csv("9,1,0\n", 1, 4, 1.0); }) == ErrorCode::ConfigInvalid);
}
