#include "tubehs/operators.hpp"

#include <cmath>
#include <limits>

#include "tubehs/error.hpp"

namespace tubehs {

namespace {

constexpr double kPointwiseSlack = 1e-10;

}  // namespace

ModulationSymbol::ModulationSymbol(const Cone& cone, Vec eta0) : eta0_(std::move(eta0)) {
  if (eta0_.size() != cone.dim()) throw Error(ErrorCode::DimensionMismatch, "eta0 length does not match cone");
  if (!contains_dual(cone, eta0_)) throw Error(ErrorCode::SymbolOutsideDualCone, "eta0 is not in the dual cone");
}

Complex ModulationSymbol::operator()(const CVec& z) const {
  Complex phase = 0.0;
  for (Eigen::Index i = 0; i < eta0_.size(); ++i) phase += z[i] * eta0_[i];
  return std::exp(Complex(0.0, 1.0) * phase);
}

TranslationMap::TranslationMap(const Cone& cone, CVec b) : b_(std::move(b)) {
  if (b_.size() != cone.dim()) throw Error(ErrorCode::DimensionMismatch, "b length does not match cone");
  if (!contains_primal(cone, Vec(b_.imag()))) {
    throw Error(ErrorCode::NotSelfMap, "Im b must lie in the closed cone for z + b to map the tube into itself");
  }
}

TranslationMap::TranslationMap(const Cone& cone, const Vec& re, const Vec& im)
    : TranslationMap(cone, CVec(re.cast<Complex>() + Complex(0.0, 1.0) * im.cast<Complex>())) {}

ModulationResult modulation_apply(const HSFunction& f, const ModulationSymbol& s) {
  if (s.eta0().size() != f.cone().dim()) throw Error(ErrorCode::DimensionMismatch, "symbol dimension differs");
  SpectralDensity g = f.density();
  g.shift += s.eta0();
  g.description = "modulate(" + f.density().description + ")";

  const auto rule = f.norm_rule();
  const Weight& w = f.weight();
  std::vector<double> moved(static_cast<std::size_t>(rule->dim));
  double c = 1.0;
  for (std::size_t j = 0; j < rule->size(); ++j) {
    std::span<const double> xi = rule->node(j);
    for (std::size_t i = 0; i < moved.size(); ++i) moved[i] = xi[i] + s.eta0()[static_cast<Eigen::Index>(i)];
    c = std::max(c, w.value(moved) / w.value(xi));
  }
  return {f.with_density(std::move(g)), c};
}

HSFunction composition_apply(const HSFunction& f, const TranslationMap& t) {
  if (t.b().size() != f.cone().dim()) throw Error(ErrorCode::DimensionMismatch, "map dimension differs");
  SpectralDensity g = f.density();
  const Vec re = t.re();
  const Vec im = t.im();
  const Vec shift = g.shift;
  // e^{i<b, xi>} = e^{-<Im b, xi>} e^{i<Re b, xi>} with xi = zeta + shift.
  Complex at_shift = std::exp(Complex(-im.dot(shift), re.dot(shift)));
  auto base = g.base;
  g.base = [base, re, im, at_shift](std::span<const double> zeta) {
    double a = 0.0;
    double b = 0.0;
    for (std::size_t i = 0; i < zeta.size(); ++i) {
      a += im[static_cast<Eigen::Index>(i)] * zeta[i];
      b += re[static_cast<Eigen::Index>(i)] * zeta[i];
    }
    return at_shift * std::exp(Complex(-a, b)) * base(zeta);
  };
  g.envelope.decay += std::max(0.0, interior_depth(f.cone(), im));
  g.envelope.frequency += re.norm() + im.norm();
  g.envelope.scale *= std::abs(at_shift);
  g.description = "compose(" + f.density().description + ")";
  return f.with_density(std::move(g));
}

PointwiseReport multiplier_pointwise_check(const Symbol& psi, double norm_bound, const std::vector<TubePoint>& samples) {
  PointwiseReport r;
  r.samples = samples.size();
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const double m = std::abs(psi(samples[j]));
    r.max_modulus = std::max(r.max_modulus, m);
    if (!(m <= norm_bound + kPointwiseSlack)) r.flagged.push_back(j);
  }
  return r;
}

Complex WeightedComposition::psi(const TubePoint& z) const { return symbol ? (*symbol)(z) : Complex(1.0); }

HSFunction WeightedComposition::apply(const HSFunction& f) const {
  HSFunction g = composition_apply(f, map);
  if (symbol) return modulation_apply(g, *symbol).function;
  return g;
}

double wco_adjoint_check(const WeightedComposition& w_op, const TubePoint& w, const std::vector<HSFunction>& tests) {
  double worst = 0.0;
  for (const HSFunction& f : tests) {
    const TubePoint target = make_tube_point(f.cone(), w_op.map(w).x, w_op.map(w).y);
    const Complex lhs = evaluate(w_op.apply(f), w);
    const Complex rhs = w_op.psi(w) * reproduce_check(f, target).rhs;
    const double scale = std::max(std::abs(rhs), std::numeric_limits<double>::min());
    worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  return worst;
}

double wco_necessary_ratio(const KernelParams& p, const Symbol& psi, const TranslationMap& t, const TubePoint& w) {
  const TubePoint image = t(w);
  require_interior(p.cone(), image.y, "phi(w)");
  return std::norm(psi(w)) * kernel_diag(p, image) / kernel_diag(p, w);
}

}  // namespace tubehs
