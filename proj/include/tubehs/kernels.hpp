#pragma once

#include <memory>
#include <vector>

#include "tubehs/fourier_laplace.hpp"

namespace tubehs {

using CMat = Eigen::MatrixXcd;

/// Kernel of H^n_{2,rho}. Every evaluation pair gets a rule with decay
/// interior_depth(Im z + Im w), shared through `cache`.
struct KernelParams {
  Weight weight;
  double target = kDefaultTarget;
  std::shared_ptr<RuleCache> cache;

  explicit KernelParams(Weight w, double target = kDefaultTarget, std::shared_ptr<RuleCache> cache = nullptr);
  const Cone& cone() const noexcept { return weight.cone(); }
};

Complex kernel_eval(const KernelParams& p, const TubePoint& z, const TubePoint& w);
double kernel_diag(const KernelParams& p, const TubePoint& z);
/// i / (z - conj(w)) on the upper half-plane.
Complex kernel_halfplane_closed(Complex z, Complex w);
/// d_z^alpha d_{conj w}^beta K(z, w).
Complex kernel_derivative(const KernelParams& p, const MultiIndex& alpha, const MultiIndex& beta, const TubePoint& z,
                          const TubePoint& w);

/// K_w as an element of the space: density e^{-i<conj w, xi>} / w_n(xi).
HSFunction kernel_function(const KernelParams& p, const TubePoint& w);

struct ReproduceResult {
  Complex lhs;
  Complex rhs;
  double rel_err;
};

/// lhs = F(w), rhs = <F, K_w> computed as a spectral inner product.
ReproduceResult reproduce_check(const HSFunction& f, const TubePoint& w);
ReproduceResult reproduce_check(const HSFunction& f, const KernelParams& p, const TubePoint& w);

/// G_{jl} = K(w_l, w_j).
CMat gram_matrix(const KernelParams& p, const std::vector<TubePoint>& points);

}  // namespace tubehs
