#include "tubehs/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "tubehs/carleson.hpp"
#include "tubehs/decomposition.hpp"
#include "tubehs/error.hpp"
#include "tubehs/fourier_laplace.hpp"
#include "tubehs/kernels.hpp"
#include "tubehs/operators.hpp"

namespace tubehs {

namespace {

using Rng = std::mt19937_64;
constexpr Complex kI{0.0, 1.0};
constexpr double kOracleTol = 1e-11;

double uni(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Vec vec1(double a) { return Vec::Constant(1, a); }
Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

/// Defects normalized by their tolerances; the criterion passes when the worst ratio is <= 1.
class Checks {
 public:
  void add(const std::string& name, double value, double tol) {
    double ratio = value == 0.0 ? 0.0 : (tol > 0.0 ? value / tol : std::numeric_limits<double>::infinity());
    if (!std::isfinite(value)) ratio = std::numeric_limits<double>::infinity();
    Slot& slot = worst_[name];
    if (slot.count == 0 || ratio > slot.ratio) {
      slot.ratio = ratio;
      slot.value = value;
    }
    slot.tol = tol;
    ++slot.count;
  }

  double worst() const {
    double w = 0.0;
    for (const auto& [name, s] : worst_) w = std::max(w, s.ratio);
    return w;
  }

  std::string detail() const {
    std::ostringstream os;
    os << std::setprecision(3);
    bool first = true;
    for (const auto& [name, s] : worst_) {
      if (!first) os << "; ";
      first = false;
      os << name << " " << s.value << " (tol " << s.tol << ", n=" << s.count << ")";
    }
    return os.str();
  }

 private:
  struct Slot {
    double ratio = 0.0;
    double value = 0.0;
    double tol = 0.0;
    int count = 0;
  };
  std::map<std::string, Slot> worst_;
};

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), std::numeric_limits<double>::min()); }

Cone random_cone(Rng& rng, int dim) {
  if (dim == 1) return Cone::orthant(1);
  if (dim == 3) return Cone::lorentz(3);
  switch (pick(rng, 0, 2)) {
    case 0: return Cone::orthant(2);
    case 1: return Cone::lorentz(2);
    default: {
      Mat g(2, 2);
      g << 1.0, uni(rng, -0.6, 0.6), uni(rng, -0.6, 0.6), 1.0;
      return Cone::simplicial(g);
    }
  }
}

Vec random_interior(Rng& rng, const Cone& cone, double lo, double hi) {
  if (!cone.polyhedral()) {
    const double h = uni(rng, lo, hi);
    const double r = uni(rng, 0.0, 0.3 * h);
    const double t = uni(rng, 0.0, 2.0 * std::numbers::pi);
    Vec y(3);
    y << r * std::cos(t), r * std::sin(t), h;
    return y;
  }
  Vec c(cone.dim());
  for (int i = 0; i < cone.dim(); ++i) c[i] = uni(rng, lo, hi);
  Vec y = cone.generators() * c;
  return y * (c.sum() / y.norm());
}

Vec random_dual(Rng& rng, const Cone& cone, double scale) {
  if (!cone.polyhedral()) {
    const double h = uni(rng, 0.0, scale);
    const double r = uni(rng, 0.0, h);
    const double t = uni(rng, 0.0, 2.0 * std::numbers::pi);
    Vec xi(3);
    xi << r * std::cos(t), r * std::sin(t), h;
    return xi;
  }
  Vec a(cone.dim());
  for (int i = 0; i < cone.dim(); ++i) a[i] = uni(rng, 0.0, scale);
  return dual_view(cone).ray_matrix * a;
}

Vec random_real(Rng& rng, int dim, double a, double b) {
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = uni(rng, a, b);
  return v;
}

Complex random_amplitude(Rng& rng) { return std::polar(uni(rng, 0.5, 1.5), uni(rng, -3.0, 3.0)); }

Polynomial random_poly(Rng& rng, int dim, int degree) {
  Polynomial p;
  p.terms.push_back({MultiIndex(static_cast<std::size_t>(dim), 0), random_amplitude(rng)});
  for (int t = 0; t < degree + 1; ++t) {
    MultiIndex a(static_cast<std::size_t>(dim), 0);
    int left = pick(rng, 1, degree);
    for (int i = 0; i < dim && left > 0; ++i) {
      const int k = i == dim - 1 ? left : pick(rng, 0, left);
      a[static_cast<std::size_t>(i)] = k;
      left -= k;
    }
    p.terms.push_back({a, random_amplitude(rng)});
  }
  return p;
}

SpectralDensity random_density(Rng& rng, const Cone& cone, bool allow_shift = true) {
  SpectralDensity d;
  switch (pick(rng, 0, 2)) {
    case 0: d = catalogue::exponential(cone, random_interior(rng, cone, 0.5, 1.5), random_amplitude(rng)); break;
    case 1:
      d = catalogue::poly_exponential(cone, random_interior(rng, cone, 0.6, 1.5), random_poly(rng, cone.dim(), 2));
      break;
    default: d = catalogue::truncated_indicator(cone, uni(rng, 0.5, 2.0), random_amplitude(rng)); break;
  }
  if (allow_shift && uni(rng, 0.0, 1.0) < 0.3) d.shift = random_dual(rng, cone, 0.5);
  return d;
}

Weight random_weight(Rng& rng, const Cone& cone, int order) {
  if (uni(rng, 0.0, 1.0) < 0.5) return Weight(order, Gauge::euclidean(cone));
  return Weight(order, Gauge::linear(cone, random_interior(rng, cone, 0.5, 1.0)));
}

TubePoint random_point(Rng& rng, const Cone& cone, double xr, double ylo, double yhi) {
  // Lorentz d=3 points stay where the tensor rule fits its node budget.
  if (cone.dim() == 3) {
    xr = std::min(xr, 0.5);
    ylo = std::max(ylo, 0.8);
    yhi = std::max(ylo, std::min(yhi, 1.5));
  }
  return make_tube_point(cone, random_real(rng, cone.dim(), -xr, xr), random_interior(rng, cone, ylo, yhi));
}

AdaptiveOptions oracle_options(double decay, std::optional<double> support) {
  AdaptiveOptions o;
  o.tol = kOracleTol;
  o.decay_hint = decay > 0.0 ? decay : 1.0;
  o.support_radius = support;
  return o;
}

/// Oracle for ||F||^2: adaptive quadrature of |f0(zeta)|^2 w_n(zeta + shift).
double oracle_norm_sq(const HSFunction& f) {
  const SpectralDensity& g = f.density();
  const Weight& w = f.weight();
  std::vector<double> xi(static_cast<std::size_t>(g.dim()));
  const Complex v = adaptive_reference(
      f.cone(),
      [&](std::span<const double> zeta) {
        for (std::size_t i = 0; i < xi.size(); ++i) xi[i] = zeta[i] + g.shift[static_cast<Eigen::Index>(i)];
        return Complex(std::norm(g.base(zeta)) * w.value(xi));
      },
      oracle_options(2.0 * g.envelope.decay, g.envelope.support_radius));
  return v.real();
}

/// Independent weight for the grid oracle: sum_k rho^{2k} by direct powers.
double direct_weight(int n, double rho) {
  double s = 0.0;
  for (int k = 0; k <= n; ++k) s += std::pow(rho, 2 * k);
  return s;
}

// --- criteria -------------------------------------------------------------

void isometry(Rng& rng, Checks& c) {
  for (int i = 0; i < 20; ++i) {
    const int dim = i % 2 == 0 ? 1 : 2;
    const int n = (i / 2) % 3;
    const Cone cone = random_cone(rng, dim);
    const HSFunction f(random_density(rng, cone), random_weight(rng, cone, n));
    const double h = hs_norm(f);
    c.add("norm^2 vs adaptive oracle", rel(h * h, oracle_norm_sq(f)), 1e-7);
  }
  const Cone c1 = Cone::orthant(1);
  const HSFunction e(catalogue::exponential(c1, vec1(1.0)), Weight(1, Gauge::euclidean(c1)));
  const double h = hs_norm(e);
  c.add("d=1 n=1 norm^2 vs 3/4", std::abs(h * h - 0.75) / 0.75, 1e-8);
}

void reproducing(Rng& rng, Checks& c) {
  for (int i = 0; i < 100; ++i) {
    const int dim = i % 10 == 9 ? 3 : (i % 2 == 0 ? 1 : 2);
    const int n = i % 3;
    const Cone cone = random_cone(rng, dim);
    const HSFunction f(random_density(rng, cone), random_weight(rng, cone, n));
    const TubePoint w = random_point(rng, cone, 2.0, 0.3, 2.0);
    c.add("reproduce rel_err", reproduce_check(f, w).rel_err, 1e-6);
  }
  const Cone c1 = Cone::orthant(1);
  const HSFunction e(catalogue::exponential(c1, vec1(1.0)), Weight(0, Gauge::euclidean(c1)));
  const auto r = reproduce_check(e, make_tube_point(c1, vec1(0.0), vec1(1.0)));
  c.add("F(i) vs 1/2", std::abs(r.lhs - 0.5) / 0.5, 1e-8);
  c.add("<f, k_i> vs 1/2", std::abs(r.rhs - 0.5) / 0.5, 1e-8);
}

void kernel_identities(Rng& rng, Checks& c) {
  const Cone c1 = Cone::orthant(1);
  const KernelParams half(Weight(0, Gauge::euclidean(c1)));
  for (int i = 0; i < 100; ++i) {
    const TubePoint z = make_tube_point(c1, vec1(uni(rng, -5.0, 5.0)), vec1(uni(rng, 0.1, 3.0)));
    const TubePoint w = make_tube_point(c1, vec1(uni(rng, -5.0, 5.0)), vec1(uni(rng, 0.1, 3.0)));
    const Complex exact = kernel_halfplane_closed(z.z()[0], w.z()[0]);
    c.add("closed form", rel(kernel_eval(half, z, w), exact), 1e-8);
  }
  for (int i = 0; i < 200; ++i) {
    const int dim = i % 20 == 19 ? 3 : (i % 2 == 0 ? 1 : 2);
    const Cone cone = random_cone(rng, dim);
    const KernelParams p(random_weight(rng, cone, i % 3));
    const TubePoint z = random_point(rng, cone, 3.0, 0.3, 2.0);
    const TubePoint w = random_point(rng, cone, 3.0, 0.3, 2.0);
    const Complex k = kernel_eval(p, z, w);
    c.add("hermitian symmetry", rel(std::conj(kernel_eval(p, w, z)), k), 1e-12);
    const Vec x0 = random_real(rng, dim, -3.0, 3.0);
    const TubePoint zs{z.x + x0, z.y};
    const TubePoint ws{w.x + x0, w.y};
    c.add("translation invariance", rel(kernel_eval(p, zs, ws), k), 1e-12);
  }
  for (int s = 0; s < 6; ++s) {
    const int dim = s % 2 == 0 ? 1 : 2;
    const Cone cone = random_cone(rng, dim);
    const KernelParams p(random_weight(rng, cone, s % 3));
    std::vector<TubePoint> pts;
    for (int j = 0; j < 8; ++j) pts.push_back(random_point(rng, cone, 2.0, 0.3, 2.0));
    const CMat g = gram_matrix(p, pts);
    Eigen::SelfAdjointEigenSolver<CMat> es(g, Eigen::EigenvaluesOnly);
    c.add("gram min eigenvalue / trace", std::max(0.0, -es.eigenvalues().minCoeff()) / g.trace().real(), 1e-9);
  }
}

struct Mode {
  std::vector<int> k;
  Complex c;
};

void decomposition(Rng& rng, Checks& c) {
  // 2 cos x on [0, 2 pi)
  {
    BoundaryGrid g{1, 16, 2.0 * std::numbers::pi, {}};
    for (int j = 0; j < 16; ++j) g.samples.emplace_back(2.0 * std::cos(2.0 * std::numbers::pi * j / 16.0), 0.0);
    const Cone c1 = Cone::orthant(1);
    for (int n = 0; n <= 1; ++n) {
      const NormReport r = norm_identity_report(g, c1, Weight(n, Gauge::euclidean(c1)));
      const double s = n == 0 ? 1.0 : 2.0;
      const double err = std::max({std::abs(r.boundary_norm_sq - 2.0 * s), std::abs(r.plus_norm_sq - s),
                                   std::abs(r.minus_norm_sq - s), r.defect});
      c.add(n == 0 ? "2cos x (2,1,1,0)" : "2cos x (4,2,2,0)", err, 1e-12);
    }
  }
  for (int i = 0; i < 50; ++i) {
    const int dim = i % 2 == 0 ? 1 : 2;
    const int n_axis = dim == 1 ? (1 << pick(rng, 4, 8)) : (1 << pick(rng, 3, 7));
    const double period = uni(rng, 1.0, 20.0);
    const bool lorentz = dim == 2 && pick(rng, 0, 1) == 1;
    const Cone cone = dim == 1 ? Cone::orthant(1) : (lorentz ? Cone::lorentz(2) : Cone::orthant(2));
    const int order = pick(rng, 0, 2);
    const bool linear = pick(rng, 0, 1) == 1;
    const Vec e = dim == 1 ? vec1(uni(rng, 0.5, 2.0)) : (lorentz ? vec2(uni(rng, -0.3, 0.3), 1.0) : vec2(uni(rng, 0.5, 1.5), uni(rng, 0.5, 1.5)));
    const Weight w(order, linear ? Gauge::linear(cone, e) : Gauge::euclidean(cone));

    // Modes with k in the dual cone or its negative, tested by integer conditions.
    auto in_dual = [&](const std::vector<int>& k) {
      if (dim == 1) return k[0] >= 0;
      return lorentz ? k[1] >= std::abs(k[0]) : (k[0] >= 0 && k[1] >= 0);
    };
    std::map<std::vector<int>, Complex> modes;
    const int count = pick(rng, 1, 8);
    const int kmax = n_axis / 2 - 1;
    while (static_cast<int>(modes.size()) < count) {
      std::vector<int> k(static_cast<std::size_t>(dim));
      for (int& v : k) v = pick(rng, -kmax, kmax);
      std::vector<int> neg = k;
      for (int& v : neg) v = -v;
      if (!in_dual(k) && !in_dual(neg)) continue;
      modes[k] = random_amplitude(rng);
    }
    const double step = 2.0 * std::numbers::pi / period;
    BoundaryGrid g{dim, n_axis, period, {}};
    const std::size_t total = dim == 1 ? static_cast<std::size_t>(n_axis) : static_cast<std::size_t>(n_axis) * n_axis;
    g.samples.assign(total, Complex(0.0));
    for (std::size_t j = 0; j < total; ++j) {
      const int j1 = dim == 1 ? static_cast<int>(j) : static_cast<int>(j) / n_axis;
      const int j2 = dim == 1 ? 0 : static_cast<int>(j) % n_axis;
      for (const auto& [k, a] : modes) {
        // <xi_k, x_j> = 2 pi <k, j> / N, reduced mod N for accuracy.
        long long kj = static_cast<long long>(k[0]) * j1 + (dim == 2 ? static_cast<long long>(k[1]) * j2 : 0LL);
        kj = ((kj % n_axis) + n_axis) % n_axis;
        g.samples[j] += a * std::exp(kI * (2.0 * std::numbers::pi * static_cast<double>(kj) / n_axis));
      }
    }
    double plus_ref = 0.0;
    double minus_ref = 0.0;
    for (const auto& [k, a] : modes) {
      Vec xi(dim);
      for (int t = 0; t < dim; ++t) xi[t] = step * k[static_cast<std::size_t>(t)];
      const bool plus = in_dual(k);
      const Vec v = plus ? xi : Vec(-xi);
      const double rho = linear ? e.dot(v) : v.norm();
      (plus ? plus_ref : minus_ref) += std::norm(a) * direct_weight(order, rho);
    }
    const NormReport r = norm_identity_report(g, cone, w);
    c.add("norm identity defect", r.defect / r.boundary_norm_sq, 1e-10);
    const double ref_total = plus_ref + minus_ref;
    c.add("component norms vs mode oracle",
          std::max(std::abs(r.plus_norm_sq - plus_ref), std::abs(r.minus_norm_sq - minus_ref)) / ref_total, 1e-10);

    const SpectrumSplit split = split_spectrum(analyze_grid(g), cone, 0.0);
    const auto up = synthesize(split.plus, dim, n_axis);
    const auto um = synthesize(split.minus, dim, n_axis);
    double scale = 0.0;
    double diff = 0.0;
    for (std::size_t j = 0; j < total; ++j) {
      scale = std::max(scale, std::abs(g.samples[j]));
      diff = std::max(diff, std::abs(up[j] + um[j] - g.samples[j]));
    }
    c.add("sample additivity", diff / scale, 1e-12);
  }
}

void boundary_convergence(Rng& rng, Checks& c) {
  for (int dim = 1; dim <= 2; ++dim) {
    const int n_axis = 64;
    const double period = 16.0 * std::numbers::pi;  // xi_k = k / 8
    const Cone cone = Cone::orthant(dim);
    BoundaryGrid g{dim, n_axis, period, {}};
    const std::size_t total = dim == 1 ? 64u : 64u * 64u;
    g.samples.assign(total, Complex(0.0));
    for (int m = 0; m < 8; ++m) {
      int k1 = pick(rng, -8, 8);
      int k2 = 0;
      if (dim == 2) {
        const int a = pick(rng, 0, 8);
        const int b = pick(rng, 0, 8 - a);
        const int sign = pick(rng, 0, 1) == 0 ? 1 : -1;
        k1 = sign * a;
        k2 = sign * b;
      }
      const Complex amp = random_amplitude(rng);
      for (std::size_t j = 0; j < total; ++j) {
        const int j1 = dim == 1 ? static_cast<int>(j) : static_cast<int>(j) / n_axis;
        const int j2 = dim == 1 ? 0 : static_cast<int>(j) % n_axis;
        const double phase = 2.0 * std::numbers::pi * (k1 * j1 + k2 * j2) / n_axis;
        g.samples[j] += amp * std::exp(kI * phase);
      }
    }
    const Spectrum s = analyze_grid(g);
    const SpectrumSplit split = split_spectrum(s, cone, 0.0);
    const Vec y0 = dim == 1 ? vec1(1.0) : vec2(1.0, 1.0);
    double prev = std::numeric_limits<double>::infinity();
    double increase = 0.0;
    double last = 0.0;
    for (int p = 0; p <= 10; ++p) {
      const double t = std::ldexp(1.0, -p);
      last = boundary_limit_error(split, Vec(t * y0));
      if (last > prev) increase = std::max(increase, last - prev);
      prev = last;
    }
    const std::string tag = dim == 1 ? " (d=1)" : " (d=2)";
    c.add("monotonicity violation" + tag, increase, 0.0);
    c.add("final error / energy" + tag, last / s.energy(), 1e-6);
  }
  const BoundaryGrid cosine = [] {
    BoundaryGrid g{1, 16, 2.0 * std::numbers::pi, {}};
    for (int j = 0; j < 16; ++j) g.samples.emplace_back(2.0 * std::cos(2.0 * std::numbers::pi * j / 16.0), 0.0);
    return g;
  }();
  const SpectrumSplit sc = split_spectrum(analyze_grid(cosine), Cone::orthant(1), 0.0);
  const double expect = std::pow(1.0 - std::exp(-1.0), 2);
  c.add("2cos x at t=1", std::abs(boundary_limit_error(sc, vec1(1.0)) - expect) / expect, 1e-12);
}

std::vector<MultiIndex> indices_up_to(int dim, int n) {
  std::vector<MultiIndex> out;
  MultiIndex a(static_cast<std::size_t>(dim), 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == dim) {
      out.push_back(a);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      a[static_cast<std::size_t>(i)] = k;
      rec(i + 1, left - k);
    }
  };
  rec(0, n);
  return out;
}

void derivative_estimates(Rng& rng, Checks& c) {
  for (int i = 0; i < 20; ++i) {
    const int dim = i % 2 == 0 ? 1 : 2;
    const int n = (i / 2) % 3;
    const Cone cone = random_cone(rng, dim);
    const HSFunction f(random_density(rng, cone), random_weight(rng, cone, n));
    const auto rule = f.norm_rule();
    const double norm = hs_norm(f, *rule);
    for (const MultiIndex& alpha : indices_up_to(dim, n)) {
      const MultiplierResult d = apply_poly_multiplier(f, Polynomial{{{alpha, Complex(1.0)}}});
      const double lhs = hs_norm(d.function, *rule);
      c.add("||d^a F|| - C_a ||F|| (relative excess)", std::max(0.0, lhs - d.domination * norm) / (d.domination * norm),
            1e-13);
    }
  }
  const Cone c1 = Cone::orthant(1);
  const HSFunction e(catalogue::exponential(c1, vec1(1.0)), Weight(1, Gauge::euclidean(c1)));
  const MultiplierResult d = apply_poly_multiplier(e, Polynomial{{{MultiIndex{1}, Complex(1.0)}}});
  const auto rule = e.norm_rule();
  const double g = hs_norm(d.function, *rule);
  const double f = hs_norm(e, *rule);
  c.add("d=1 ||F'|| vs 1/2", std::abs(g - 0.5) / 0.5, 1e-8);
  c.add("d=1 C_P vs 1", std::abs(d.domination - 1.0), 1e-8);
  c.add("d=1 1/2 <= C sqrt(3/4) excess", std::max(0.0, g - d.domination * f), 0.0);
}

void carleson_checks(Rng& rng, Checks& c) {
  const Cone c1 = Cone::orthant(1);
  const KernelParams half(Weight(0, Gauge::euclidean(c1)));
  const TubePoint i1 = make_tube_point(c1, vec1(0.0), vec1(1.0));
  const DiscreteMeasure delta{{i1}, {1.0}};
  c.add("point mass lambda vs 1/2", std::abs(embedding_estimate(half, delta, {i1}).lambda - 0.5) / 0.5, 1e-8);

  for (int i = 0; i < 10; ++i) {
    const int dim = i % 2 == 0 ? 1 : 2;
    const Cone cone = random_cone(rng, dim);
    const KernelParams p(random_weight(rng, cone, i % 3));
    DiscreteMeasure mu;
    const int size = pick(rng, 1, 5);
    for (int m = 0; m < size; ++m) {
      mu.points.push_back(random_point(rng, cone, 2.0, 0.3, 2.0));
      mu.masses.push_back(uni(rng, 0.1, 2.0));
    }
    std::vector<TubePoint> frame;
    for (int j = 0; j < 4; ++j) {
      Vec x = random_real(rng, dim, -0.2, 0.2);
      x[0] += -3.0 + 2.0 * j;
      frame.push_back(make_tube_point(cone, x, random_interior(rng, cone, 0.5, 1.5)));
    }
    const double lambda = embedding_estimate(p, mu, frame).lambda;
    double sup = 0.0;
    for (const TubePoint& w : frame) sup = std::max(sup, testing_ratio(p, mu, w));
    c.add("kernel-test sup - lambda (relative excess)", std::max(0.0, sup - lambda) / lambda, 1e-8);
  }
}

void operator_checks(Rng& rng, Checks& c) {
  const Cone c1 = Cone::orthant(1);
  const Weight w0(0, Gauge::euclidean(c1));
  const TubePoint i1 = make_tube_point(c1, vec1(0.0), vec1(1.0));
  const TranslationMap shift_i(c1, vec1(0.0), vec1(1.0));
  const Symbol one = [](const TubePoint&) { return Complex(1.0); };
  const double ratio = wco_necessary_ratio(KernelParams(w0), one, shift_i, i1);
  c.add("necessary ratio at w=i vs 1/2", std::abs(ratio - 0.5) / 0.5, 1e-8);
  {
    const HSFunction e(catalogue::exponential(c1, vec1(1.0)), w0);
    const WeightedComposition op{std::nullopt, shift_i};
    c.add("W F(i) vs F(2i) = 1/3", rel(evaluate(op.apply(e), i1), 1.0 / 3.0), 1e-8);
    c.add("adjoint (b=i)", wco_adjoint_check(op, i1, {e}), 1e-7);
  }

  for (int dim = 1; dim <= 2; ++dim) {
    for (int n = 0; n <= 2; ++n) {
      const Cone cone = random_cone(rng, dim);
      const Weight w = random_weight(rng, cone, n);
      std::vector<HSFunction> tests;
      for (int t = 0; t < 2; ++t) tests.emplace_back(random_density(rng, cone), w);
      const TubePoint pt = random_point(rng, cone, 1.0, 0.4, 1.5);
      for (int family = 0; family < 4; ++family) {
        std::optional<ModulationSymbol> sym;
        if (family >= 2) sym.emplace(cone, random_dual(rng, cone, 1.0));
        Vec re = Vec::Zero(dim);
        Vec im = Vec::Zero(dim);
        if (family % 2 == 1) {
          re = random_real(rng, dim, -1.0, 1.0);
          im = random_interior(rng, cone, 0.2, 1.0);
        }
        const WeightedComposition op{sym, TranslationMap(cone, re, im)};
        c.add("adjoint identity", wco_adjoint_check(op, pt, tests), 1e-7);
      }
    }
  }

  for (int i = 0; i < 50; ++i) {
    const int dim = i % 2 == 0 ? 1 : 2;
    const Cone cone = random_cone(rng, dim);
    const HSFunction f(random_density(rng, cone), random_weight(rng, cone, i % 3));
    const Vec im = pick(rng, 0, 3) == 0 ? Vec(Vec::Zero(dim)) : random_interior(rng, cone, 0.05, 1.0);
    const HSFunction g = composition_apply(f, TranslationMap(cone, random_real(rng, dim, -2.0, 2.0), im));
    const auto rule = common_norm_rule(f, g);
    const double nf = hs_norm(f, *rule);
    const double ng = hs_norm(g, *rule);
    c.add("contraction excess", std::max(0.0, ng - nf) / nf, 1e-13);
  }
}

void quadrature_oracle(Rng& rng, Checks& c) {
  constexpr double target = 1e-8;
  for (int i = 0; i < 50; ++i) {
    const int dim = i % 10 == 9 ? 3 : (i % 2 == 0 ? 1 : 2);
    const Cone cone = random_cone(rng, dim);
    const Weight w = random_weight(rng, cone, pick(rng, 0, 2));
    RuleRequest req;
    req.target = target;
    Integrand phi;
    const int family = i % 4;
    const TubePoint z = random_point(rng, cone, 1.5, 0.4, 1.5);
    const TubePoint u = random_point(rng, cone, 1.5, 0.4, 1.5);
    if (family == 0) {
      // Fourier-Laplace integrand e^{i<z, xi>} e^{-<b, xi>}
      const Vec b = random_interior(rng, cone, 0.3, 1.0);
      req.decay_scale = interior_depth(cone, Vec(z.y + b));
      req.frequency = z.x.norm() + z.y.norm() + b.norm();
      const CVec zz = z.z();
      phi = [zz, b](std::span<const double> xi) {
        Complex s = 0.0;
        for (std::size_t k = 0; k < xi.size(); ++k) s += (kI * zz[static_cast<Eigen::Index>(k)] - b[static_cast<Eigen::Index>(k)]) * xi[k];
        return std::exp(s);
      };
    } else if (family == 1 || family == 3) {
      // kernel integrand, with a derivative monomial for family 3
      const Vec dx = z.x - u.x;
      const Vec sy = z.y + u.y;
      req.decay_scale = interior_depth(cone, sy);
      req.frequency = dx.norm() + sy.norm();
      const int power = family == 3 ? pick(rng, 1, 2) : 0;
      req.degree = power;
      phi = [dx, sy, w, power](std::span<const double> xi) {
        double re = 0.0;
        double im = 0.0;
        for (std::size_t k = 0; k < xi.size(); ++k) {
          re += dx[static_cast<Eigen::Index>(k)] * xi[k];
          im += sy[static_cast<Eigen::Index>(k)] * xi[k];
        }
        return std::pow(kI * xi[0], power) * std::exp(Complex(-im, re)) / w.value(xi);
      };
    } else {
      // norm integrand |f|^2 w_n
      const SpectralDensity d = random_density(rng, cone, false);
      req.decay_scale = 2.0 * d.envelope.decay;
      req.degree = 2 * d.envelope.degree + 2 * w.order();
      req.frequency = 2.0 * d.envelope.frequency;
      req.support_radius = d.envelope.support_radius;
      phi = [d, w](std::span<const double> xi) { return Complex(std::norm(d.base(xi)) * w.value(xi)); };
    }
    const QuadratureRule rule = build_rule(cone, req);
    const Complex got = integrate(rule, phi);
    const Complex ref = adaptive_reference(cone, phi, oracle_options(req.decay_scale, req.support_radius));
    c.add("rule vs adaptive (relative, 10x target)", rel(got, ref), 10.0 * target);
  }
}

struct Spec {
  const char* name;
  double time_limit;
  void (*body)(Rng&, Checks&);
};

const Spec kSpecs[kCriterionCount] = {
    {"Paley-Wiener isometry", 10.0, isometry},
    {"reproducing property", 30.0, reproducing},
    {"kernel closed form and symmetries", 10.0, kernel_identities},
    {"decomposition norm identity", 20.0, decomposition},
    {"boundary convergence", 5.0, boundary_convergence},
    {"derivative estimates", 10.0, derivative_estimates},
    {"Carleson point mass and kernel test", 30.0, carleson_checks},
    {"operator identities", 20.0, operator_checks},
    {"quadrature oracle agreement", 30.0, quadrature_oracle},
};

}  // namespace

CriterionResult run_criterion(int id, std::uint64_t seed) {
  CriterionResult r;
  r.id = id;
  if (id < 1 || id > kCriterionCount) {
    r.name = "unknown";
    r.detail = "no such criterion";
    return r;
  }
  const Spec& spec = kSpecs[id - 1];
  r.name = spec.name;
  r.time_limit = spec.time_limit;
  r.threshold = 1.0;
  Rng rng(seed + static_cast<std::uint64_t>(id) * 7919u);
  Checks checks;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    spec.body(rng, checks);
    r.measured = checks.worst();
    r.detail = checks.detail();
  } catch (const std::exception& e) {
    r.measured = std::numeric_limits<double>::infinity();
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.passed = r.measured <= r.threshold && r.seconds <= r.time_limit;
  return r;
}

std::vector<CriterionResult> run_acceptance(std::uint64_t seed) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run_criterion(id, seed));
  return out;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.passed ? "PASS" : "FAIL") << " criterion " << r.id << " [" << r.name << "] worst defect/tol "
     << std::setprecision(3) << r.measured << " time " << std::fixed << std::setprecision(2) << r.seconds << "s (limit "
     << std::setprecision(0) << r.time_limit << "s) :: " << r.detail;
  return os.str();
}

nlohmann::json results_to_json(const std::vector<CriterionResult>& results, double total_seconds) {
  nlohmann::json j;
  j["criteria"] = nlohmann::json::array();
  bool all = true;
  for (const CriterionResult& r : results) {
    all = all && r.passed;
    j["criteria"].push_back({{"id", r.id},
                             {"name", r.name},
                             {"passed", r.passed},
                             {"worst_defect_over_tol", std::isfinite(r.measured) ? nlohmann::json(r.measured) : nlohmann::json("inf")},
                             {"within_time_limit", r.seconds <= r.time_limit},
                             {"time_limit", r.time_limit},
                             {"detail", r.detail}});
  }
  j["within_total_limit"] = total_seconds <= kTotalTimeLimit;
  j["all_passed"] = all;
  return j;
}

}  // namespace tubehs
