#include "tubehs/config.hpp"

#include <fstream>
#include <sstream>

#include "tubehs/error.hpp"

namespace tubehs {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) invalid(std::string("missing field '") + key + "'");
  return j.at(key);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) invalid(std::string(what) + " must be a number");
  return j.get<double>();
}

int integer(const json& j, const char* what) {
  if (!j.is_number_integer()) invalid(std::string(what) + " must be an integer");
  return j.get<int>();
}

std::string text(const json& j, const char* what) {
  if (!j.is_string()) invalid(std::string(what) + " must be a string");
  return j.get<std::string>();
}

}  // namespace

Vec parse_vec(const json& j, int dim, const char* what) {
  if (!j.is_array()) invalid(std::string(what) + " must be an array");
  if (static_cast<int>(j.size()) != dim) {
    invalid(std::string(what) + " must have " + std::to_string(dim) + " entries");
  }
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = number(j[static_cast<std::size_t>(i)], what);
  return v;
}

Complex parse_complex(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {number(j[0], "real part"), number(j[1], "imaginary part")};
  if (j.is_object()) return {number(field(j, "re"), "re"), number(field(j, "im"), "im")};
  invalid("complex values are numbers, [re, im] or {\"re\", \"im\"}");
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Cone parse_cone(const json& j) {
  const std::string kind = text(field(j, "kind"), "cone kind");
  const int dim = integer(field(j, "dim"), "cone dim");
  if (kind == "orthant") return build_cone(ConeKind::Orthant, dim);
  if (kind == "lorentz") return build_cone(ConeKind::Lorentz, dim);
  if (kind == "simplicial") {
    const json& g = field(j, "generators");
    if (!g.is_array() || static_cast<int>(g.size()) != dim) invalid("simplicial cones need d generators");
    Mat m(dim, dim);
    for (int c = 0; c < dim; ++c) m.col(c) = parse_vec(g[static_cast<std::size_t>(c)], dim, "generator");
    return build_cone(ConeKind::Simplicial, dim, m);
  }
  invalid("unknown cone kind '" + kind + "'");
}

json cone_to_json(const Cone& cone) {
  json j;
  switch (cone.kind()) {
    case ConeKind::Orthant: j["kind"] = "orthant"; break;
    case ConeKind::Lorentz: j["kind"] = "lorentz"; break;
    case ConeKind::Simplicial: j["kind"] = "simplicial"; break;
  }
  j["dim"] = cone.dim();
  if (cone.kind() == ConeKind::Simplicial) {
    json g = json::array();
    for (Eigen::Index c = 0; c < cone.generators().cols(); ++c) {
      json col = json::array();
      for (Eigen::Index r = 0; r < cone.generators().rows(); ++r) col.push_back(cone.generators()(r, c));
      g.push_back(col);
    }
    j["generators"] = g;
  }
  return j;
}

Gauge parse_gauge(const json& j, const Cone& cone) {
  const std::string kind = text(field(j, "kind"), "gauge kind");
  if (kind == "euclidean") return Gauge::euclidean(cone);
  if (kind == "linear") return Gauge::linear(cone, parse_vec(field(j, "direction"), cone.dim(), "gauge direction"));
  invalid("unknown gauge kind '" + kind + "'");
}

TubePoint parse_point(const json& j, const Cone& cone) {
  return make_tube_point(cone, parse_vec(field(j, "x"), cone.dim(), "x"), parse_vec(field(j, "y"), cone.dim(), "y"));
}

std::vector<TubePoint> parse_points(const json& j, const Cone& cone) {
  if (!j.is_array()) invalid("point lists must be arrays");
  std::vector<TubePoint> out;
  for (const json& p : j) out.push_back(parse_point(p, cone));
  return out;
}

Polynomial parse_polynomial(const json& j, int dim) {
  if (!j.is_array()) invalid("polynomial terms must be an array");
  Polynomial p;
  for (const json& t : j) {
    const json& a = field(t, "alpha");
    if (!a.is_array() || static_cast<int>(a.size()) != dim) invalid("alpha must have d entries");
    MultiIndex alpha;
    for (const json& v : a) {
      const int k = integer(v, "alpha entry");
      if (k < 0) invalid("alpha entries must be nonnegative");
      alpha.push_back(k);
    }
    p.terms.emplace_back(std::move(alpha), parse_complex(field(t, "coeff")));
  }
  return p;
}

SpectralDensity parse_density(const json& j, const Cone& cone) {
  const std::string kind = text(field(j, "kind"), "density kind");
  const Complex amp = j.contains("amplitude") ? parse_complex(j.at("amplitude")) : Complex(1.0);
  SpectralDensity d;
  if (kind == "exponential") {
    d = catalogue::exponential(cone, parse_vec(field(j, "rate"), cone.dim(), "rate"), amp);
  } else if (kind == "poly_exponential") {
    d = catalogue::poly_exponential(cone, parse_vec(field(j, "rate"), cone.dim(), "rate"),
                                    parse_polynomial(field(j, "terms"), cone.dim()));
  } else if (kind == "truncated_indicator") {
    d = catalogue::truncated_indicator(cone, number(field(j, "radius"), "radius"), amp);
  } else {
    invalid("unknown density kind '" + kind + "'");
  }
  if (j.contains("shift")) {
    d.shift = parse_vec(j.at("shift"), cone.dim(), "shift");
    if (!contains_dual(cone, d.shift)) throw Error(ErrorCode::OutsideDualCone, "density shift outside the dual cone");
  }
  return d;
}

DiscreteMeasure parse_measure(const json& j, const Cone& cone) {
  if (!j.is_array()) invalid("measure must be an array of point masses");
  DiscreteMeasure mu;
  for (const json& e : j) {
    mu.points.push_back(parse_point(e, cone));
    mu.masses.push_back(number(field(e, "mass"), "mass"));
  }
  validate_measure(cone, mu);
  return mu;
}

BoundaryGrid parse_grid(const json& j) {
  BoundaryGrid g;
  g.dim = integer(field(j, "dim"), "grid dim");
  g.points_per_axis = integer(field(j, "points_per_axis"), "points_per_axis");
  g.period = number(field(j, "period"), "period");
  const json& s = field(j, "samples");
  if (!s.is_array()) invalid("samples must be an array");
  for (const json& v : s) g.samples.push_back(parse_complex(v));
  validate_grid(g);
  return g;
}

BoundaryGrid parse_grid_csv(const std::string& body, int dim, int points_per_axis, double period) {
  BoundaryGrid g{dim, points_per_axis, period, {}};
  const std::size_t count = dim == 1 ? static_cast<std::size_t>(points_per_axis)
                                     : static_cast<std::size_t>(points_per_axis) * points_per_axis;
  if (dim < 1 || dim > 2 || points_per_axis < 1) invalid("grid shape is invalid");
  g.samples.assign(count, Complex(0.0));
  std::vector<bool> seen(count, false);
  std::istringstream in(body);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string a;
    std::string b;
    std::string c;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, c)) {
      invalid("grid CSV rows are index,re,im");
    }
    std::size_t idx = 0;
    double re = 0.0;
    double im = 0.0;
    try {
      const long long v = std::stoll(a);
      if (v < 0) invalid("negative grid index");
      idx = static_cast<std::size_t>(v);
      re = std::stod(b);
      im = std::stod(c);
    } catch (const std::invalid_argument&) {
      if (rows == 0) continue;  // header
      invalid("unparseable grid CSV row: " + line);
    } catch (const std::out_of_range&) {
      invalid("grid CSV value out of range: " + line);
    }
    if (idx >= count) invalid("grid index " + std::to_string(idx) + " out of range");
    if (seen[idx]) invalid("duplicate grid index " + std::to_string(idx));
    seen[idx] = true;
    g.samples[idx] = {re, im};
    ++rows;
  }
  if (rows != count) invalid("grid CSV has " + std::to_string(rows) + " rows, expected " + std::to_string(count));
  validate_grid(g);
  return g;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) invalid("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace tubehs
