#include "tubehs/fourier_laplace.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "tubehs/error.hpp"

namespace tubehs {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kFarField = 1e6;

/// Scratch buffer xi = zeta + shift.
struct Shifted {
  explicit Shifted(const Vec& shift) : s(shift), buf(static_cast<std::size_t>(shift.size())) {}
  std::span<const double> operator()(std::span<const double> zeta) {
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = zeta[i] + s[static_cast<Eigen::Index>(i)];
    return buf;
  }
  const Vec& s;
  std::vector<double> buf;
};

double dot(const Vec& a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) s += a[static_cast<Eigen::Index>(i)] * b[i];
  return s;
}

void check_rule_for(const QuadratureRule& rule, double decay, double frequency) {
  if (rule.decay_scale > decay * (1.0 + 1e-12)) {
    throw Error(ErrorCode::RuleMismatch, "rule decay " + std::to_string(rule.decay_scale) +
                                             " exceeds available decay " + std::to_string(decay));
  }
  if (rule.frequency < frequency * (1.0 - 1e-12)) {
    throw Error(ErrorCode::OscillationBudgetExceeded, "rule frequency " + std::to_string(rule.frequency) +
                                                          " below required " + std::to_string(frequency));
  }
}

RuleRequest evaluation_request(const HSFunction& f, const TubePoint& z, int extra_degree) {
  const Envelope& env = f.density().envelope;
  RuleRequest req;
  req.decay_scale = interior_depth(f.cone(), z.y) + env.decay;
  req.degree = env.degree + extra_degree;
  req.frequency = z.x.norm() + z.y.norm() + env.frequency;
  req.target = f.target();
  req.support_radius = env.support_radius;
  return req;
}

RuleRequest norm_request(const HSFunction& f, int weight_order) {
  const Envelope& env = f.density().envelope;
  RuleRequest req;
  req.decay_scale = 2.0 * env.decay;
  req.degree = 2 * env.degree + 2 * weight_order;
  req.frequency = 2.0 * env.frequency;
  req.target = f.target();
  req.support_radius = env.support_radius;
  return req;
}

Complex evaluate_on(const HSFunction& f, const TubePoint& z, const MultiIndex* alpha, const QuadratureRule& rule) {
  const SpectralDensity& g = f.density();
  const CVec zz = z.z();
  const auto d = static_cast<std::size_t>(f.cone().dim());
  Shifted shifted(g.shift);
  const Complex integral = integrate(rule, [&](std::span<const double> zeta) {
    std::span<const double> xi = shifted(zeta);
    Complex phase = 0.0;
    for (std::size_t i = 0; i < d; ++i) phase += zz[static_cast<Eigen::Index>(i)] * zeta[i];
    Complex v = std::exp(kI * phase) * g.base(zeta);
    if (alpha) {
      for (std::size_t i = 0; i < d; ++i) {
        for (int k = 0; k < (*alpha)[i]; ++k) v *= kI * xi[i];
      }
    }
    return v;
  });
  Complex shift_phase = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    shift_phase += zz[static_cast<Eigen::Index>(i)] * g.shift[static_cast<Eigen::Index>(i)];
  }
  return std::exp(kI * shift_phase) * integral;
}

}  // namespace

TubePoint make_tube_point(const Cone& cone, const Vec& x, const Vec& y) {
  if (x.size() != cone.dim() || y.size() != cone.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "tube point dimension does not match cone");
  }
  require_interior(cone, y, "Im z");
  return TubePoint{x, y};
}

TubePoint make_tube_point(const Cone& cone, const CVec& z) {
  return make_tube_point(cone, Vec(z.real()), Vec(z.imag()));
}

Complex SpectralDensity::value(const Vec& xi) const {
  const Vec zeta = xi - shift;
  return base(std::span<const double>(zeta.data(), static_cast<std::size_t>(zeta.size())));
}

SpectralDensity make_density(int dim, std::function<Complex(std::span<const double>)> f, Envelope env,
                             std::string description) {
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "density dimension must be positive");
  return SpectralDensity{std::move(f), env, Vec::Zero(dim), std::move(description)};
}

HSFunction::HSFunction(SpectralDensity density, Weight weight, double target, std::shared_ptr<RuleCache> cache)
    : density_(std::move(density)), weight_(std::move(weight)), target_(target), cache_(std::move(cache)) {
  if (!density_.base) throw Error(ErrorCode::InvalidArgument, "density has no evaluator");
  if (density_.dim() != cone().dim()) {
    throw Error(ErrorCode::DimensionMismatch, "density dimension does not match cone");
  }
  if (!(density_.envelope.decay > 0.0) && !density_.envelope.support_radius) {
    throw Error(ErrorCode::InvalidArgument, "density envelope guarantees neither decay nor bounded support");
  }
  if (!contains_dual(cone(), density_.shift)) {
    throw Error(ErrorCode::OutsideDualCone, "density shift lies outside the dual cone");
  }
  if (!(target_ > 0.0)) throw Error(ErrorCode::InvalidArgument, "target must be positive");
  if (!cache_) cache_ = std::make_shared<RuleCache>(cone());
}

std::shared_ptr<const QuadratureRule> HSFunction::norm_rule() const {
  return cache_->get(norm_request(*this, weight_.order()));
}

HSFunction HSFunction::with_weight(const Weight& weight) const {
  return HSFunction(density_, weight, target_, cache_);
}

HSFunction HSFunction::with_density(SpectralDensity density) const {
  return HSFunction(std::move(density), weight_, target_, cache_);
}

int Polynomial::degree() const {
  int deg = 0;
  for (const auto& [alpha, a] : terms) {
    if (a != Complex(0.0)) deg = std::max(deg, std::accumulate(alpha.begin(), alpha.end(), 0));
  }
  return deg;
}

Complex Polynomial::operator()(const CVec& zeta) const {
  Complex acc = 0.0;
  for (const auto& [alpha, a] : terms) {
    Complex term = a;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      for (int k = 0; k < alpha[i]; ++k) term *= zeta[static_cast<Eigen::Index>(i)];
    }
    acc += term;
  }
  return acc;
}

Complex Polynomial::at_i_xi(std::span<const double> xi) const {
  Complex acc = 0.0;
  for (const auto& [alpha, a] : terms) {
    Complex term = a;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      for (int k = 0; k < alpha[i]; ++k) term *= kI * xi[i];
    }
    acc += term;
  }
  return acc;
}

Complex integrate_density(const HSFunction& f, const Integrand& phi, RuleRequest req) {
  const SpectralDensity& g = f.density();
  req.decay_scale += g.envelope.decay;
  req.degree += g.envelope.degree;
  req.frequency += g.envelope.frequency;
  req.target = f.target();
  if (g.envelope.support_radius) {
    req.support_radius = req.support_radius ? std::min(*req.support_radius, *g.envelope.support_radius)
                                            : *g.envelope.support_radius;
  }
  const auto rule = f.cache()->get(req);
  Shifted shifted(g.shift);
  return integrate(*rule, [&](std::span<const double> zeta) { return phi(shifted(zeta)) * g.base(zeta); });
}

Complex evaluate(const HSFunction& f, const TubePoint& z) {
  const RuleRequest req = evaluation_request(f, make_tube_point(f.cone(), z.x, z.y), 0);
  return evaluate_on(f, z, nullptr, *f.cache()->get(req));
}

Complex evaluate(const HSFunction& f, const TubePoint& z, const QuadratureRule& rule) {
  const RuleRequest req = evaluation_request(f, make_tube_point(f.cone(), z.x, z.y), 0);
  check_rule_for(rule, req.decay_scale, req.frequency);
  if (rule.dim != f.cone().dim()) throw Error(ErrorCode::RuleMismatch, "rule dimension differs");
  return evaluate_on(f, z, nullptr, rule);
}

Complex evaluate_derivative(const HSFunction& f, const MultiIndex& alpha, const TubePoint& z) {
  if (static_cast<int>(alpha.size()) != f.cone().dim()) {
    throw Error(ErrorCode::DimensionMismatch, "multi-index length does not match cone");
  }
  int order = 0;
  for (int a : alpha) {
    if (a < 0) throw Error(ErrorCode::InvalidArgument, "negative multi-index entry");
    order += a;
  }
  const RuleRequest req = evaluation_request(f, make_tube_point(f.cone(), z.x, z.y), order);
  return evaluate_on(f, z, &alpha, *f.cache()->get(req));
}

double hs_norm(const HSFunction& f, const QuadratureRule& rule) {
  const RuleRequest req = norm_request(f, f.weight().order());
  check_rule_for(rule, req.decay_scale, req.frequency);
  const SpectralDensity& g = f.density();
  const Weight& w = f.weight();
  Shifted shifted(g.shift);
  const Complex v = integrate(rule, [&](std::span<const double> zeta) {
    return Complex(std::norm(g.base(zeta)) * w.value(shifted(zeta)));
  });
  return std::sqrt(std::max(0.0, v.real()));
}

double hs_norm(const HSFunction& f) { return hs_norm(f, *f.norm_rule()); }

std::shared_ptr<const QuadratureRule> common_norm_rule(const HSFunction& f, const HSFunction& g) {
  if (f.cone().dim() != g.cone().dim()) throw Error(ErrorCode::ParameterMismatch, "functions on different cones");
  const RuleRequest a = norm_request(f, f.weight().order());
  const RuleRequest b = norm_request(g, g.weight().order());
  RuleRequest req = a;
  req.decay_scale = std::min(a.decay_scale, b.decay_scale);
  req.degree = std::max(a.degree, b.degree);
  req.frequency = std::max(a.frequency, b.frequency);
  req.target = std::min(a.target, b.target);
  if (a.support_radius && b.support_radius) {
    req.support_radius = std::max(*a.support_radius, *b.support_radius);
  } else {
    req.support_radius.reset();
    if (!(req.decay_scale > 0.0)) {
      throw Error(ErrorCode::ParameterMismatch, "no common rule for a compactly supported and a decaying density");
    }
  }
  return f.cache()->get(req);
}

double h2_sup_norm(const HSFunction& f) {
  const auto rule = f.cache()->get(norm_request(f, 0));
  const SpectralDensity& g = f.density();
  const Complex v = integrate(*rule, [&](std::span<const double> zeta) { return Complex(std::norm(g.base(zeta))); });
  return std::sqrt(std::max(0.0, v.real()));
}

Complex hs_inner(const HSFunction& f, const HSFunction& g) {
  if (!same_space(f.weight(), g.weight())) {
    throw Error(ErrorCode::ParameterMismatch, "inner product of functions in different spaces");
  }
  const SpectralDensity& df = f.density();
  const SpectralDensity& dg = g.density();
  const Vec offset = df.shift - dg.shift;
  if (!contains_dual(f.cone(), offset)) {
    if (contains_dual(f.cone(), Vec(-offset))) return std::conj(hs_inner(g, f));
    throw Error(ErrorCode::ParameterMismatch, "density supports are not nested");
  }
  // Integrate in the variable of f; g is defined on all of shift_f + Omega*.
  RuleRequest req;
  req.decay_scale = df.envelope.decay + dg.envelope.decay;
  req.degree = df.envelope.degree + dg.envelope.degree + 2 * f.weight().order();
  req.frequency = df.envelope.frequency + dg.envelope.frequency;
  req.target = std::min(f.target(), g.target());
  req.support_radius = df.envelope.support_radius;
  if (!req.support_radius && dg.envelope.support_radius) {
    if (offset.isZero(0.0)) {
      req.support_radius = dg.envelope.support_radius;
    } else if (!(req.decay_scale > 0.0)) {
      throw Error(ErrorCode::ParameterMismatch, "inner product needs decay or aligned supports");
    }
  }
  const auto rule = f.cache()->get(req);
  const Weight& w = f.weight();
  Shifted shifted(df.shift);
  std::vector<double> gbuf(static_cast<std::size_t>(f.cone().dim()));
  return integrate(*rule, [&](std::span<const double> zeta) {
    std::span<const double> xi = shifted(zeta);
    for (std::size_t i = 0; i < gbuf.size(); ++i) gbuf[i] = xi[i] - dg.shift[static_cast<Eigen::Index>(i)];
    return df.base(zeta) * std::conj(dg.base(gbuf)) * w.value(xi);
  });
}

SpectralDensity translate_density(const HSFunction& f, const Vec& y) {
  if (y.size() != f.cone().dim()) throw Error(ErrorCode::DimensionMismatch, "y length does not match cone");
  require_interior(f.cone(), y, "translate height");
  SpectralDensity g = f.density();
  const double shift_damp = std::exp(-y.dot(g.shift));
  const Vec yy = y;
  auto base = g.base;
  g.base = [base, yy, shift_damp](std::span<const double> zeta) {
    return shift_damp * std::exp(-dot(yy, zeta)) * base(zeta);
  };
  g.envelope.decay += interior_depth(f.cone(), y);
  g.envelope.frequency += y.norm();
  g.envelope.scale *= shift_damp;
  g.description = "translate(" + f.density().description + ")";
  return g;
}

double domination_constant(const Polynomial& p, const Weight& w, const QuadratureRule& rule, const Vec& shift) {
  std::vector<double> far(static_cast<std::size_t>(rule.dim));
  Shifted shifted(shift);
  // The apex of shift + Omega* is not a rule node but belongs to the support.
  std::vector<double> apex(shift.data(), shift.data() + shift.size());
  double best = std::abs(p.at_i_xi(apex)) / std::sqrt(w.value(apex));
  for (std::size_t j = 0; j < rule.size(); ++j) {
    std::span<const double> xi = rule.node(j);
    std::span<const double> moved = shifted(xi);
    best = std::max(best, std::abs(p.at_i_xi(moved)) / std::sqrt(w.value(moved)));
    double n = 0.0;
    for (double v : xi) n += v * v;
    n = std::sqrt(n);
    if (n == 0.0) continue;
    for (std::size_t i = 0; i < far.size(); ++i) far[i] = xi[i] / n * kFarField;
    best = std::max(best, std::abs(p.at_i_xi(far)) / std::sqrt(w.value(far)));
  }
  return best;
}

MultiplierResult apply_poly_multiplier(const HSFunction& f, const Polynomial& p) {
  for (const auto& [alpha, a] : p.terms) {
    if (static_cast<int>(alpha.size()) != f.cone().dim()) {
      throw Error(ErrorCode::DimensionMismatch, "polynomial multi-index length does not match cone");
    }
  }
  const int deg = p.degree();
  if (deg > f.weight().order()) {
    throw Error(ErrorCode::DegreeTooHigh,
                "deg P = " + std::to_string(deg) + " exceeds order " + std::to_string(f.weight().order()));
  }
  const double c = domination_constant(p, f.weight(), *f.norm_rule(), f.density().shift);

  SpectralDensity g = f.density();
  auto base = g.base;
  const Vec shift = g.shift;
  const Polynomial poly = p;
  g.base = [base, shift, poly](std::span<const double> zeta) {
    std::vector<double> xi(zeta.begin(), zeta.end());
    for (std::size_t i = 0; i < xi.size(); ++i) xi[i] += shift[static_cast<Eigen::Index>(i)];
    return poly.at_i_xi(xi) * base(zeta);
  };
  double coef_sum = 0.0;
  for (const auto& [alpha, a] : p.terms) coef_sum += std::abs(a);
  g.envelope.degree += deg;
  g.envelope.scale *= coef_sum;
  g.description = "P(D)(" + f.density().description + ")";
  return {HSFunction(std::move(g), f.weight().with_order(0), f.target(), f.cache()), c};
}

namespace catalogue {

SpectralDensity exponential(const Cone& cone, const Vec& rate, Complex amplitude) {
  if (rate.size() != cone.dim()) throw Error(ErrorCode::DimensionMismatch, "rate length does not match cone");
  require_interior(cone, rate, "exponential rate");
  Envelope env;
  env.scale = std::abs(amplitude);
  env.decay = interior_depth(cone, rate);
  env.frequency = rate.norm();
  const Vec b = rate;
  return make_density(cone.dim(),
                      [b, amplitude](std::span<const double> xi) { return amplitude * std::exp(-dot(b, xi)); },
                      env, "exponential");
}

SpectralDensity poly_exponential(const Cone& cone, const Vec& rate, const Polynomial& p) {
  if (rate.size() != cone.dim()) throw Error(ErrorCode::DimensionMismatch, "rate length does not match cone");
  require_interior(cone, rate, "exponential rate");
  for (const auto& [alpha, a] : p.terms) {
    if (static_cast<int>(alpha.size()) != cone.dim()) {
      throw Error(ErrorCode::DimensionMismatch, "polynomial multi-index length does not match cone");
    }
  }
  Envelope env;
  env.scale = 0.0;
  for (const auto& [alpha, a] : p.terms) env.scale += std::abs(a);
  env.decay = interior_depth(cone, rate);
  env.degree = p.degree();
  env.frequency = rate.norm();
  const Vec b = rate;
  const Polynomial poly = p;
  return make_density(
      cone.dim(),
      [b, poly](std::span<const double> xi) {
        CVec v(static_cast<Eigen::Index>(xi.size()));
        for (std::size_t i = 0; i < xi.size(); ++i) v[static_cast<Eigen::Index>(i)] = xi[i];
        return poly(v) * std::exp(-dot(b, xi));
      },
      env, "poly_exponential");
}

SpectralDensity truncated_indicator(const Cone& cone, double radius, Complex amplitude) {
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "indicator radius must be positive");
  Envelope env;
  env.scale = std::abs(amplitude);
  env.support_radius = radius;
  const Cone c = cone;
  Mat inverse;
  if (cone.polyhedral()) inverse = dual_view(cone).ray_matrix.inverse();
  return make_density(
      cone.dim(),
      [c, inverse, radius, amplitude](std::span<const double> xi) -> Complex {
        if (!c.polyhedral()) {
          const double s = std::hypot(xi[0], xi[1]);
          return (s <= radius && xi[2] - s <= radius) ? amplitude : Complex(0.0);
        }
        for (Eigen::Index i = 0; i < inverse.rows(); ++i) {
          double eta = 0.0;
          for (Eigen::Index k = 0; k < inverse.cols(); ++k) eta += inverse(i, k) * xi[static_cast<std::size_t>(k)];
          if (eta > radius) return 0.0;
        }
        return amplitude;
      },
      env, "truncated_indicator");
}

}  // namespace catalogue

}  // namespace tubehs
