#include "tubehs/cone.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tubehs/error.hpp"

namespace tubehs {

namespace {

constexpr double kSingularTol = 1e-10;

Mat normalize_columns(const Mat& m) {
  Mat out = m;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const double n = out.col(j).norm();
    if (n > 0.0) out.col(j) /= n;
  }
  return out;
}

Mat lorentz2_generators() {
  Mat g(2, 2);
  g << 1.0, -1.0,
       1.0, 1.0;
  return g;
}

double norm_of(std::span<const double> v) {
  double s = 0.0;
  for (double a : v) s += a * a;
  return std::sqrt(s);
}

void check_dim(const Cone& cone, std::size_t n) {
  if (static_cast<int>(n) != cone.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "vector of length " + std::to_string(n) + " for cone of dimension " +
                    std::to_string(cone.dim()));
  }
}

}  // namespace

Cone::Cone(ConeKind kind, int dim, Mat generators)
    : kind_(kind), dim_(dim), generators_(std::move(generators)) {}

Cone Cone::orthant(int dim) {
  if (dim < 1) throw Error(ErrorCode::UnsupportedDimension, "orthant needs d >= 1");
  return Cone(ConeKind::Orthant, dim, Mat::Identity(dim, dim));
}

Cone Cone::lorentz(int dim) {
  if (dim == 2) return Cone(ConeKind::Lorentz, 2, lorentz2_generators());
  if (dim == 3) return Cone(ConeKind::Lorentz, 3, Mat());
  throw Error(ErrorCode::UnsupportedDimension,
              "lorentz cone supported for d = 2 or 3, got " + std::to_string(dim));
}

Cone Cone::simplicial(const Mat& generators) {
  if (generators.rows() < 1 || generators.rows() != generators.cols()) {
    throw Error(ErrorCode::UnsupportedDimension, "simplicial generators must be a square d x d matrix");
  }
  if (!generators.allFinite()) throw Error(ErrorCode::SingularGenerators, "non-finite generators");
  for (Eigen::Index j = 0; j < generators.cols(); ++j) {
    if (generators.col(j).norm() == 0.0) throw Error(ErrorCode::SingularGenerators, "zero generator column");
  }
  const double det = normalize_columns(generators).determinant();
  if (std::abs(det) <= kSingularTol) {
    throw Error(ErrorCode::SingularGenerators, "|det G| = " + std::to_string(std::abs(det)));
  }
  return Cone(ConeKind::Simplicial, static_cast<int>(generators.rows()), generators);
}

Cone build_cone(ConeKind kind, int dim, const Mat& generators) {
  switch (kind) {
    case ConeKind::Orthant: return Cone::orthant(dim);
    case ConeKind::Lorentz: return Cone::lorentz(dim);
    case ConeKind::Simplicial:
      if (generators.rows() != dim) {
        throw Error(ErrorCode::UnsupportedDimension, "generator matrix does not match dim");
      }
      return Cone::simplicial(generators);
  }
  throw Error(ErrorCode::UnsupportedCone, "unknown cone kind");
}

DualConeView dual_view(const Cone& cone, int lorentz_ray_samples) {
  DualConeView view;
  view.kind = cone.kind();
  view.dim = cone.dim();
  if (!cone.polyhedral()) {
    view.analytic = true;
    const int m = std::max(lorentz_ray_samples, 3);
    for (int k = 0; k < m; ++k) {
      const double t = 2.0 * std::numbers::pi * k / m;
      Vec r(3);
      r << std::cos(t), std::sin(t), 1.0;
      view.extreme_rays.push_back(r / std::sqrt(2.0));
    }
    return view;
  }
  // Omega* = { xi : G^T xi >= 0 }, whose extreme rays are the columns of G^{-T}.
  const Mat& g = cone.generators();
  const Mat normals = normalize_columns(g);
  const Mat rays = normalize_columns(g.transpose().inverse());
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    view.halfspace_normals.push_back(normals.col(j));
    view.extreme_rays.push_back(rays.col(j));
  }
  view.ray_matrix = rays;
  return view;
}

bool contains_dual(const Cone& cone, std::span<const double> xi, double tol) {
  check_dim(cone, xi.size());
  const double slack = tol * norm_of(xi);
  if (!cone.polyhedral()) {
    return xi[2] >= std::hypot(xi[0], xi[1]) - slack;
  }
  const Mat& g = cone.generators();
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    double dot = 0.0;
    for (Eigen::Index i = 0; i < g.rows(); ++i) dot += g(i, j) * xi[static_cast<std::size_t>(i)];
    if (dot / g.col(j).norm() < -slack) return false;
  }
  return true;
}

bool contains_dual(const Cone& cone, const Vec& xi, double tol) {
  return contains_dual(cone, std::span<const double>(xi.data(), static_cast<std::size_t>(xi.size())), tol);
}

bool contains_primal(const Cone& cone, const Vec& y, double tol) {
  check_dim(cone, static_cast<std::size_t>(y.size()));
  const double slack = tol * y.norm();
  if (!cone.polyhedral()) return y[2] >= std::hypot(y[0], y[1]) - slack;
  // y = G lambda with lambda >= 0; compare lambda in units of unit generators.
  const Mat unit = normalize_columns(cone.generators());
  const Vec lambda = unit.lu().solve(y);
  return (lambda.array() >= -slack).all();
}

double interior_depth(const Cone& cone, const Vec& y) {
  check_dim(cone, static_cast<std::size_t>(y.size()));
  if (!cone.polyhedral()) {
    return (y[2] - std::hypot(y[0], y[1])) / std::sqrt(2.0);
  }
  const Mat rays = normalize_columns(cone.generators().transpose().inverse());
  return (rays.transpose() * y).minCoeff();
}

void require_interior(const Cone& cone, const Vec& y, const char* what) {
  const double depth = interior_depth(cone, y);
  if (!(depth > 0.0)) {
    throw Error(ErrorCode::NotInInterior,
                std::string(what) + " has interior depth " + std::to_string(depth) + " <= 0");
  }
}

bool is_proper(const Cone& /*cone*/) noexcept {
  // Construction rejects singular generators, so every Cone value is proper.
  return true;
}

Vec radial_coordinates(const Cone& cone, const Vec& xi) {
  check_dim(cone, static_cast<std::size_t>(xi.size()));
  if (!cone.polyhedral()) {
    const double s = std::hypot(xi[0], xi[1]);
    Vec out(2);
    out << s, xi[2] - s;
    return out;
  }
  // A = unit rays of Omega* = normalized columns of G^{-T}; eta = A^{-1} xi.
  const Mat rays = normalize_columns(cone.generators().transpose().inverse());
  return rays.lu().solve(xi);
}

}  // namespace tubehs
