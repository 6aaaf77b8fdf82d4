#pragma once

#include <vector>

#include "tubehs/kernels.hpp"

namespace tubehs {

/// Finite sum of point masses mu = sum_m mass_m delta_{z_m} on T_Omega.
struct DiscreteMeasure {
  std::vector<TubePoint> points;
  std::vector<double> masses;

  std::size_t size() const noexcept { return masses.size(); }
};

/// Checks positive masses and interior points.
void validate_measure(const Cone& cone, const DiscreteMeasure& mu);

/// sum_m mu_m |K(z_m, w)|^2 / K(w, w).
double testing_ratio(const KernelParams& p, const DiscreteMeasure& mu, const TubePoint& w);

/// M_{jl} = sum_m mu_m K(z_m, w_j) conj(K(z_m, w_l)).
CMat embedding_form(const KernelParams& p, const DiscreteMeasure& mu, const std::vector<TubePoint>& frame);

struct EmbeddingEstimate {
  double lambda = 0.0;        ///< largest generalized eigenvalue of (M, G)
  double condition = 0.0;     ///< condition number of the regularized Gram matrix
  double regularization = 0.0;
};

/// Compression of T_mu to span{K_{w_j}}; a lower bound for the embedding norm squared.
/// GramIllConditioned when cond(G + eps I) > 1e12.
EmbeddingEstimate embedding_estimate(const KernelParams& p, const DiscreteMeasure& mu,
                                     const std::vector<TubePoint>& frame);

struct SpectralCheckReport {
  std::vector<double> ratios;  ///< lhs / rhs per density
  double max_ratio = 0.0;
  std::size_t violations = 0;
};

/// lhs = sum_m mu_m |F(z_m)|^2 against rhs = C ||F||^2 for each density.
SpectralCheckReport spectral_embedding_check(const KernelParams& p, const DiscreteMeasure& mu,
                                             const std::vector<SpectralDensity>& densities, double constant);

}  // namespace tubehs
