#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "tubehs/kernels.hpp"

namespace tubehs {

/// psi(z) = e^{i<z, eta0>} with eta0 in the dual cone.
class ModulationSymbol {
 public:
  ModulationSymbol(const Cone& cone, Vec eta0);

  const Vec& eta0() const noexcept { return eta0_; }
  Complex operator()(const CVec& z) const;
  Complex operator()(const TubePoint& z) const { return (*this)(z.z()); }

 private:
  Vec eta0_;
};

/// phi(z) = z + b with Im b in the closed cone.
class TranslationMap {
 public:
  TranslationMap(const Cone& cone, CVec b);
  TranslationMap(const Cone& cone, const Vec& re, const Vec& im);

  const CVec& b() const noexcept { return b_; }
  Vec re() const { return b_.real(); }
  Vec im() const { return b_.imag(); }
  TubePoint operator()(const TubePoint& z) const { return TubePoint{z.x + re(), z.y + im()}; }

 private:
  CVec b_;
};

struct ModulationResult {
  HSFunction function;
  double shift_constant;  ///< max over rule nodes of w_n(xi + eta0) / w_n(xi)
};

/// psi F: density f(xi - eta0) on eta0 + Omega*.
ModulationResult modulation_apply(const HSFunction& f, const ModulationSymbol& s);

/// F o phi: density e^{i<b, xi>} f(xi).
HSFunction composition_apply(const HSFunction& f, const TranslationMap& t);

using Symbol = std::function<Complex(const TubePoint&)>;

struct PointwiseReport {
  std::size_t samples = 0;
  std::vector<std::size_t> flagged;
  double max_modulus = 0.0;
};

/// Flags samples with |psi(w)| > norm_bound + 1e-10.
PointwiseReport multiplier_pointwise_check(const Symbol& psi, double norm_bound, const std::vector<TubePoint>& samples);

/// Weighted composition W F = psi (F o phi), with psi a modulation or the constant 1.
struct WeightedComposition {
  std::optional<ModulationSymbol> symbol;
  TranslationMap map;

  Complex psi(const TubePoint& z) const;
  HSFunction apply(const HSFunction& f) const;
};

/// max over tests of |<W F, K_w> - psi(w) F(phi(w))| / |psi(w) F(phi(w))|.
double wco_adjoint_check(const WeightedComposition& w_op, const TubePoint& w, const std::vector<HSFunction>& tests);

/// |psi(w)|^2 K(phi w, phi w) / K(w, w).
double wco_necessary_ratio(const KernelParams& p, const Symbol& psi, const TranslationMap& t, const TubePoint& w);

}  // namespace tubehs
