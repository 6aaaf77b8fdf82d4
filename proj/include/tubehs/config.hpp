#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "tubehs/carleson.hpp"
#include "tubehs/decomposition.hpp"
#include "tubehs/fourier_laplace.hpp"

namespace tubehs {

using nlohmann::json;

// Every parser throws Error(ConfigInvalid) on schema problems; domain errors
// of the underlying constructors (SingularGenerators, NotInInterior, ...)
// propagate unchanged.

/// {"kind": "orthant" | "lorentz" | "simplicial", "dim": d, "generators": [[..], ..]}
/// Generators are listed as vectors (the columns of G).
Cone parse_cone(const json& j);
json cone_to_json(const Cone& cone);

/// {"kind": "euclidean"} or {"kind": "linear", "direction": [..]}
Gauge parse_gauge(const json& j, const Cone& cone);

Vec parse_vec(const json& j, int dim, const char* what);
Complex parse_complex(const json& j);
json complex_to_json(Complex z);

/// {"x": [..], "y": [..]}
TubePoint parse_point(const json& j, const Cone& cone);
std::vector<TubePoint> parse_points(const json& j, const Cone& cone);

/// [{"alpha": [..], "coeff": c}, ..]
Polynomial parse_polynomial(const json& j, int dim);

/// {"kind": "exponential", "rate": [..], "amplitude": c}
/// {"kind": "poly_exponential", "rate": [..], "terms": [..]}
/// {"kind": "truncated_indicator", "radius": r, "amplitude": c}
/// with an optional "shift": [..] in the dual cone.
SpectralDensity parse_density(const json& j, const Cone& cone);

/// [{"x": [..], "y": [..], "mass": m}, ..]
DiscreteMeasure parse_measure(const json& j, const Cone& cone);

/// {"dim", "points_per_axis", "period", "samples": [[re, im], ..]}
BoundaryGrid parse_grid(const json& j);
/// Rows "index,re,im" (header optional, any order of indices).
BoundaryGrid parse_grid_csv(const std::string& text, int dim, int points_per_axis, double period);

std::string read_text_file(const std::string& path);

}  // namespace tubehs
