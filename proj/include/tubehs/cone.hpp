#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace tubehs {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class ConeKind { Orthant, Lorentz, Simplicial };

/// Proper open convex cone in R^d.
///
/// Orthant and simplicial cones (and the 2D Lorentz cone, which is simplicial)
/// are stored through a generator matrix G with Omega = G * (0, inf)^d. The 3D
/// Lorentz cone {y_3 > |y'|} is described analytically.
class Cone {
 public:
  static Cone orthant(int dim);
  static Cone lorentz(int dim);
  static Cone simplicial(const Mat& generators);

  ConeKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  bool polyhedral() const noexcept { return kind_ != ConeKind::Lorentz || dim_ == 2; }
  /// Generator columns; empty for the 3D Lorentz cone.
  const Mat& generators() const noexcept { return generators_; }

 private:
  Cone(ConeKind kind, int dim, Mat generators);

  ConeKind kind_;
  int dim_;
  Mat generators_;
};

/// Omega* = { xi : <h_i, xi> >= 0 } plus the extreme rays spanning it.
struct DualConeView {
  ConeKind kind;
  int dim;
  /// Unit halfspace normals. Empty when `analytic` is set.
  std::vector<Vec> halfspace_normals;
  /// Unit extreme rays. For the 3D Lorentz cone a discretization of the
  /// boundary circle (cos t, sin t, 1)/sqrt(2).
  std::vector<Vec> extreme_rays;
  /// True for the 3D Lorentz cone: xi_3 >= |xi'|.
  bool analytic = false;
  /// Matrix with the extreme rays as columns (polyhedral cones only).
  Mat ray_matrix;
};

inline constexpr double kMembershipTol = 1e-12;

Cone build_cone(ConeKind kind, int dim, const Mat& generators = Mat());

DualConeView dual_view(const Cone& cone, int lorentz_ray_samples = 64);

/// Closed dual cone membership with tolerance tol * |xi|.
bool contains_dual(const Cone& cone, std::span<const double> xi, double tol = kMembershipTol);
bool contains_dual(const Cone& cone, const Vec& xi, double tol = kMembershipTol);

/// Closed primal cone membership with tolerance tol * |y|.
bool contains_primal(const Cone& cone, const Vec& y, double tol = kMembershipTol);

/// c_y = min over unit xi in Omega* of <y, xi>. Positive iff y lies in the
/// open cone; zero or negative values are returned as a diagnostic.
double interior_depth(const Cone& cone, const Vec& y);

/// Throws NotInInterior unless interior_depth(y) > 0.
void require_interior(const Cone& cone, const Vec& y, const char* what = "point");

bool is_proper(const Cone& cone) noexcept;

/// Radial chart coordinates of xi in Omega*: eta = A^{-1} xi for polyhedral
/// cones (A = ray_matrix), and (s, tau) with xi = (s cos t, s sin t, s + tau)
/// for the 3D Lorentz cone.
Vec radial_coordinates(const Cone& cone, const Vec& xi);

}  // namespace tubehs
