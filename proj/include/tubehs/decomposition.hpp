#pragma once

#include <complex>
#include <vector>

#include "tubehs/cone.hpp"
#include "tubehs/gauge.hpp"
#include "tubehs/quadrature.hpp"

namespace tubehs {

/// Samples u(x_j) on the periodic grid x_j = j L / N, j in [0, N)^d. The
/// flat index is row-major: j = j_1 N + j_2 for d = 2.
struct BoundaryGrid {
  int dim = 1;
  int points_per_axis = 0;
  double period = 0.0;
  std::vector<Complex> samples;

  std::size_t size() const noexcept { return samples.size(); }
};

/// Validates dim in {1, 2}, N a power of two >= 4, L > 0 and the sample count.
void validate_grid(const BoundaryGrid& g);

/// One DFT bin: k in [-N/2, N/2)^d, xi_k = 2 pi k / L.
struct Bin {
  std::vector<int> k;
  Vec xi;
  Complex coeff;
};

/// b_k = N^{-d} sum_j u_j e^{-i<xi_k, x_j>}, so that u_j = sum_k b_k e^{i<xi_k, x_j>}
/// and sum_k |b_k|^2 = N^{-d} sum_j |u_j|^2.
struct Spectrum {
  int dim = 1;
  int points_per_axis = 0;
  double period = 0.0;
  std::vector<Bin> bins;  ///< lexicographic in k

  double energy() const noexcept;
};

Spectrum analyze_grid(const BoundaryGrid& g);

struct SpectrumSplit {
  Cone cone = Cone::orthant(1);
  int points_per_axis = 0;
  double period = 0.0;
  std::vector<Bin> plus;   ///< xi_k in the closed dual cone, DC included
  std::vector<Bin> minus;  ///< xi_k in minus the dual cone, DC excluded
  std::vector<Bin> residual;
  double residual_mass = 0.0;
  double total_energy = 0.0;
};

/// SpectrumOutsideCones when residual_mass > tol * total energy.
SpectrumSplit split_spectrum(const Spectrum& s, const Cone& cone, double tol);

/// Finite exponential sums F_+ on T_Omega and F_- on T_{-Omega}.
class Extension {
 public:
  explicit Extension(SpectrumSplit split) : split_(std::move(split)) {}

  /// WrongTube unless Im z is in the open cone.
  Complex plus(const Vec& x, const Vec& y) const;
  /// WrongTube unless -Im z is in the open cone.
  Complex minus(const Vec& x, const Vec& y) const;
  const SpectrumSplit& split() const noexcept { return split_; }

 private:
  SpectrumSplit split_;
};

Extension extend(const SpectrumSplit& split);

/// Inverse DFT of a set of bins back onto the N^d grid.
std::vector<Complex> synthesize(const std::vector<Bin>& bins, int dim, int points_per_axis);

struct NormReport {
  double boundary_norm_sq = 0.0;
  double plus_norm_sq = 0.0;
  double minus_norm_sq = 0.0;
  double defect = 0.0;
  double residual_mass = 0.0;
};

/// Boundary norm with the reflected weight over the raw spectrum, against the
/// weighted energies of the two components.
NormReport norm_identity_report(const BoundaryGrid& g, const Cone& cone, const Weight& weight, double tol = 0.0);

/// sum over plus bins of |e^{-<y, xi_k>} - 1|^2 |b_k|^2.
double boundary_limit_error(const SpectrumSplit& split, const Vec& y);

}  // namespace tubehs
