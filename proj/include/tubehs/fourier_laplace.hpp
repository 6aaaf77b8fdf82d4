#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tubehs/cone.hpp"
#include "tubehs/gauge.hpp"
#include "tubehs/quadrature.hpp"

namespace tubehs {

using CVec = Eigen::VectorXcd;
using MultiIndex = std::vector<int>;

/// z = x + i y with y in the open cone.
struct TubePoint {
  Vec x;
  Vec y;

  CVec z() const { return x.cast<Complex>() + Complex(0.0, 1.0) * y.cast<Complex>(); }
};

TubePoint make_tube_point(const Cone& cone, const Vec& x, const Vec& y);
TubePoint make_tube_point(const Cone& cone, const CVec& z);

/// Declared bound |f0(xi)| <= scale * e^{-decay * sigma(xi)} * (1 + |xi|)^degree,
/// sigma = sum of radial chart coordinates. `frequency` bounds the complex
/// exponent of f0 (|b| for e^{-<b, xi>}); `support_radius` truncates support in
/// radial coordinates.
struct Envelope {
  double scale = 1.0;
  double decay = 0.0;
  int degree = 0;
  double frequency = 0.0;
  std::optional<double> support_radius;
};

/// Spectral density g(xi) = f0(xi - shift), supported in shift + Omega*.
/// All integrals over Omega* are carried out in the unshifted variable.
struct SpectralDensity {
  std::function<Complex(std::span<const double>)> base;
  Envelope envelope;
  Vec shift;
  std::string description;

  int dim() const noexcept { return static_cast<int>(shift.size()); }
  /// f0(xi - shift); the caller is responsible for xi in shift + Omega*.
  Complex value(const Vec& xi) const;
};

SpectralDensity make_density(int dim, std::function<Complex(std::span<const double>)> f, Envelope env,
                             std::string description = {});

/// F = L f represented by its density, with the Sobolev weight it is measured in.
class HSFunction {
 public:
  HSFunction(SpectralDensity density, Weight weight, double target = kDefaultTarget,
             std::shared_ptr<RuleCache> cache = nullptr);

  const SpectralDensity& density() const noexcept { return density_; }
  const Weight& weight() const noexcept { return weight_; }
  const Cone& cone() const noexcept { return weight_.cone(); }
  double target() const noexcept { return target_; }
  const std::shared_ptr<RuleCache>& cache() const noexcept { return cache_; }

  /// Rule used for weighted-norm integrals of this density.
  std::shared_ptr<const QuadratureRule> norm_rule() const;
  /// Same density measured at another order.
  HSFunction with_weight(const Weight& weight) const;
  HSFunction with_density(SpectralDensity density) const;

 private:
  SpectralDensity density_;
  Weight weight_;
  double target_;
  std::shared_ptr<RuleCache> cache_;
};

/// Multivariate complex polynomial sum a_alpha zeta^alpha.
struct Polynomial {
  std::vector<std::pair<MultiIndex, Complex>> terms;

  int degree() const;
  Complex operator()(const CVec& zeta) const;
  Complex at_i_xi(std::span<const double> xi) const;  ///< P(i xi)
};

/// Integral over Omega* of phi(xi) g(xi) for the (possibly shifted) density g.
/// The request fields describe phi alone; density envelope is folded in.
Complex integrate_density(const HSFunction& f, const Integrand& phi, RuleRequest phi_request);

Complex evaluate(const HSFunction& f, const TubePoint& z);
/// Evaluation on a caller-supplied rule; RuleMismatch if the rule assumes more
/// decay than exp(-<y, xi>) f provides, OscillationBudgetExceeded if it was
/// built for a lower frequency.
Complex evaluate(const HSFunction& f, const TubePoint& z, const QuadratureRule& rule);
Complex evaluate_derivative(const HSFunction& f, const MultiIndex& alpha, const TubePoint& z);

double hs_norm(const HSFunction& f);
double hs_norm(const HSFunction& f, const QuadratureRule& rule);
/// <F, G> = int f conj(g) w_n. ParameterMismatch when the weights or supports are incompatible.
Complex hs_inner(const HSFunction& f, const HSFunction& g);
/// A norm rule valid for both functions, so their norms are compared node by node.
std::shared_ptr<const QuadratureRule> common_norm_rule(const HSFunction& f, const HSFunction& g);
/// Spectral-side H^2 norm (int |f|^2)^{1/2}.
double h2_sup_norm(const HSFunction& f);

/// Spectrum e^{-<y, xi>} f(xi) of the boundary translate F_y.
SpectralDensity translate_density(const HSFunction& f, const Vec& y);

struct MultiplierResult {
  HSFunction function;   ///< P(i xi) f, measured at order 0
  double domination;     ///< empirical C_P with |P(i xi)| <= C_P w_n^{1/2}
};

MultiplierResult apply_poly_multiplier(const HSFunction& f, const Polynomial& p);

/// Empirical sup of |P(i xi)| / w_n(xi)^{1/2} over xi = node + shift and the far-field rays of the nodes.
double domination_constant(const Polynomial& p, const Weight& w, const QuadratureRule& rule, const Vec& shift);

/// Density catalogue.
namespace catalogue {

/// amplitude * e^{-<rate, xi>}, rate in int Omega.
SpectralDensity exponential(const Cone& cone, const Vec& rate, Complex amplitude = 1.0);
/// P(xi) e^{-<rate, xi>} with a real-argument polynomial P.
SpectralDensity poly_exponential(const Cone& cone, const Vec& rate, const Polynomial& p);
/// amplitude on the radial box {every radial coordinate <= radius}.
SpectralDensity truncated_indicator(const Cone& cone, double radius, Complex amplitude = 1.0);

}  // namespace catalogue

}  // namespace tubehs
