#include <doctest.h>

#include "support.hpp"
#include "tubehs/error.hpp"
#include "tubehs/fourier_laplace.hpp"
#include "tubehs/kernels.hpp"

using namespace tubehs;
using namespace tt;

namespace {

const Cone kHalf = Cone::orthant(1);

HSFunction e_minus(int n) { return HSFunction(catalogue::exponential(kHalf, v1(1.0)), Weight(n, Gauge::euclidean(kHalf))); }

SpectralDensity zero_density(const Cone& c) {
  Envelope env;
  env.decay = 1.0;
  return make_density(c.dim(), [](std::span<const double>) { return Complex(0.0); }, env, "zero");
}

HSFunction random_function(Rng& rng, int dim, int n) {
  const Cone c = dim == 1 ? kHalf : Cone::orthant(2);
  const Vec rate = sample_interior(rng, c, 0.5, 1.5);
  SpectralDensity d;
  if (rng() % 2 == 0) {
    d = catalogue::exponential(c, rate, Complex(uni(rng, -1, 1), uni(rng, -1, 1)));
  } else {
    Polynomial p;
    MultiIndex a(static_cast<std::size_t>(dim), 0);
    p.terms.emplace_back(a, Complex(1.0));
    a[0] = 1;
    p.terms.emplace_back(a, Complex(uni(rng, -1, 1), uni(rng, -1, 1)));
    d = catalogue::poly_exponential(c, rate, p);
  }
  return HSFunction(d, Weight(n, Gauge::euclidean(c)));
}

}  // namespace

TEST_CASE("evaluation examples") {
  const HSFunction zero(zero_density(kHalf), Weight(0, Gauge::euclidean(kHalf)));
  CHECK(evaluate(zero, make_tube_point(kHalf, v1(0.3), v1(0.7))) == Complex(0.0));
  CHECK(rel(evaluate(e_minus(0), make_tube_point(kHalf, v1(0.0), v1(1.0))), 0.5) <= 1e-8);
  const Cone o2 = Cone::orthant(2);
  const HSFunction f2(catalogue::exponential(o2, v2(1, 1)), Weight(0, Gauge::euclidean(o2)));
  CHECK(rel(evaluate(f2, make_tube_point(o2, v2(0, 0), v2(1, 1))), 0.25) <= 1e-8);
  // F(z) = 1 / ((1 - i z1)(1 - i z2)) away from the imaginary axis.
  const TubePoint z = make_tube_point(o2, v2(0.7, -1.2), v2(0.4, 1.1));
  const CVec zz = z.z();
  const Complex exact = 1.0 / ((1.0 - kI * zz[0]) * (1.0 - kI * zz[1]));
  CHECK(rel(evaluate(f2, z), exact) <= 1e-8);
}

TEST_CASE("derivative examples") {
  const HSFunction f = e_minus(0);
  const TubePoint i1 = make_tube_point(kHalf, v1(0.0), v1(1.0));
  CHECK(rel(evaluate_derivative(f, {0}, i1), evaluate(f, i1)) <= 1e-14);
  CHECK(rel(evaluate_derivative(f, {1}, i1), kI / 4.0) <= 1e-8);
  CHECK(rel(evaluate_derivative(f, {1}, make_tube_point(kHalf, v1(0.0), v1(2.0))), kI / 9.0) <= 1e-8);
}

TEST_CASE("norm examples") {
  const HSFunction zero(zero_density(kHalf), Weight(1, Gauge::euclidean(kHalf)));
  CHECK(hs_norm(zero) == 0.0);
  CHECK(h2_sup_norm(zero) == 0.0);
  CHECK(rel(hs_norm(e_minus(0)), std::sqrt(0.5)) <= 1e-8);
  CHECK(rel(hs_norm(e_minus(1)), std::sqrt(0.75)) <= 1e-8);
  CHECK(rel(h2_sup_norm(e_minus(2)), std::sqrt(0.5)) <= 1e-8);
}

TEST_CASE("translate density examples") {
  Envelope env;
  env.support_radius = 30.0;
  const SpectralDensity one = make_density(1, [](std::span<const double>) { return Complex(1.0); }, env, "one");
  const HSFunction f1(one, Weight(0, Gauge::euclidean(kHalf)));
  const SpectralDensity t1 = translate_density(f1, v1(1.0));
  for (double xi : {0.0, 0.5, 3.0}) CHECK(rel(t1.value(v1(xi)), std::exp(-xi)) <= 1e-15);

  const HSFunction e = e_minus(0);
  const HSFunction te(translate_density(e, v1(1.0)), e.weight());
  CHECK(rel(hs_norm(te) * hs_norm(te), 0.25) <= 1e-8);

  // Two translates by y compose into one by 2y.
  const HSFunction once(translate_density(e, v1(0.6)), e.weight());
  const SpectralDensity twice = translate_density(once, v1(0.6));
  const SpectralDensity direct = translate_density(e, v1(1.2));
  for (double xi : {0.0, 0.3, 2.0, 7.0}) CHECK(rel(twice.value(v1(xi)), direct.value(v1(xi))) <= 1e-14);
}

TEST_CASE("polynomial multiplier examples") {
  const HSFunction f1 = e_minus(1);
  const MultiplierResult one = apply_poly_multiplier(f1, Polynomial{{{MultiIndex{0}, Complex(1.0)}}});
  CHECK(std::abs(one.domination - 1.0) <= 1e-12);
  for (double xi : {0.0, 0.5, 2.0}) CHECK(rel(one.function.density().value(v1(xi)), f1.density().value(v1(xi))) <= 1e-15);

  const MultiplierResult d = apply_poly_multiplier(f1, Polynomial{{{MultiIndex{1}, Complex(1.0)}}});
  CHECK(std::abs(d.domination - 1.0) <= 1e-8);
  const double g = hs_norm(d.function, *f1.norm_rule());
  CHECK(rel(g, 0.5) <= 1e-8);
  CHECK(g <= d.domination * hs_norm(f1));
  CHECK_THROWS_AS(apply_poly_multiplier(e_minus(0), Polynomial{{{MultiIndex{1}, Complex(1.0)}}}), Error);
}

TEST_CASE("constructor and rule validation") {
  Envelope none;
  const SpectralDensity bad = make_density(1, [](std::span<const double>) { return Complex(1.0); }, none);
  CHECK_THROWS_AS(HSFunction(bad, Weight(0, Gauge::euclidean(kHalf))), Error);
  SpectralDensity shifted = catalogue::exponential(kHalf, v1(1.0));
  shifted.shift = v1(-1.0);
  CHECK_THROWS_AS(HSFunction(shifted, Weight(0, Gauge::euclidean(kHalf))), Error);
  CHECK_THROWS_AS(make_tube_point(kHalf, v1(0.0), v1(-1.0)), Error);

  const HSFunction f = e_minus(0);
  const QuadratureRule greedy = build_rule(kHalf, 5.0, 0);
  try {
    evaluate(f, make_tube_point(kHalf, v1(0.0), v1(1.0)), greedy);
    FAIL("expected RuleMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RuleMismatch);
  }
}

TEST_CASE("boundary translates recover the density") {
  Rng rng(41);
  for (int i = 0; i < 20; ++i) {
    const int dim = 1 + i % 2;
    const HSFunction f = random_function(rng, dim, i % 3);
    const Cone c = f.cone();
    const Vec y = sample_interior(rng, c, 0.2, 1.5);
    const SpectralDensity t = translate_density(f, y);
    const auto rule = f.norm_rule();
    for (std::size_t j = 0; j < rule->size(); j += 7) {
      const Vec xi = Eigen::Map<const Vec>(rule->node(j).data(), dim);
      const Complex back = t.value(xi) / std::exp(-y.dot(xi));
      const Complex orig = f.density().value(xi);
      if (std::abs(orig) < 1e-250) continue;
      CHECK(rel(back, orig) <= 1e-12);
    }
  }
}

TEST_CASE("point evaluations are bounded by norm times kernel diagonal") {
  Rng rng(42);
  for (int i = 0; i < 50; ++i) {
    const int dim = 1 + i % 2;
    const HSFunction f = random_function(rng, dim, i % 3);
    const Cone c = f.cone();
    Vec x(dim);
    for (int k = 0; k < dim; ++k) x[k] = uni(rng, -2, 2);
    const TubePoint z = make_tube_point(c, x, sample_interior(rng, c, 0.2, 2.0));
    const double bound = hs_norm(f) * std::sqrt(kernel_diag(KernelParams(f.weight()), z));
    CHECK(std::abs(evaluate(f, z)) <= bound * (1.0 + 1e-6));
  }
}

TEST_CASE("norms grow with the order and h2 is the smallest") {
  Rng rng(43);
  for (int i = 0; i < 20; ++i) {
    const HSFunction f = random_function(rng, 1 + i % 2, 0);
    double prev = h2_sup_norm(f);
    for (int n = 0; n <= 3; ++n) {
      const double v = hs_norm(f.with_weight(f.weight().with_order(n)));
      CHECK(v >= prev * (1.0 - 1e-12));
      prev = v;
    }
  }
}

TEST_CASE("deeper translates have smaller spectral norms") {
  Rng rng(44);
  for (int i = 0; i < 20; ++i) {
    const HSFunction f = random_function(rng, 2, i % 3);
    const Cone c = f.cone();
    const Vec y1 = sample_interior(rng, c, 0.1, 1.0);
    const Vec y2 = y1 + sample_interior(rng, c, 0.0, 1.0);
    const HSFunction a(translate_density(f, y1), Weight(0, f.weight().gauge()));
    const HSFunction b(translate_density(f, y2), Weight(0, f.weight().gauge()));
    const auto rule = common_norm_rule(a, b);
    CHECK(hs_norm(b, *rule) <= hs_norm(a, *rule) * (1.0 + 1e-12));
  }
}

TEST_CASE("norm convergence gives locally uniform convergence") {
  Rng rng(45);
  const Weight w(1, Gauge::euclidean(kHalf));
  const HSFunction f(catalogue::exponential(kHalf, v1(1.0)), w);
  std::vector<TubePoint> grid;
  for (int a = 0; a < 5; ++a) {
    for (int b = 0; b < 4; ++b) grid.push_back(make_tube_point(kHalf, v1(-2.0 + a), v1(0.5 + 0.5 * b)));
  }
  const KernelParams p(w);
  double ck = 0.0;
  for (const TubePoint& z : grid) ck = std::max(ck, std::sqrt(kernel_diag(p, z)));
  for (int j = 1; j <= 6; ++j) {
    const double eps = std::pow(0.3, j);
    const HSFunction fj(catalogue::exponential(kHalf, v1(1.0 + eps)), w);
    // f_j - f is itself a sum of two catalogue exponentials.
    Envelope env;
    env.decay = 1.0;
    env.scale = 2.0;
    const HSFunction diff(make_density(1, [eps](std::span<const double> xi) {
                            return Complex(std::exp(-(1.0 + eps) * xi[0]) - std::exp(-xi[0]));
                          }, env), w);
    const double dist = hs_norm(diff);
    double sup = 0.0;
    for (const TubePoint& z : grid) sup = std::max(sup, std::abs(evaluate(fj, z) - evaluate(f, z)));
    CHECK(sup <= ck * dist * (1.0 + 1e-6));
  }
}

TEST_CASE("derivatives match central differences") {
  Rng rng(46);
  const double h = 1e-4;
  for (int i = 0; i < 20; ++i) {
    const int dim = 1 + i % 2;
    const HSFunction f = random_function(rng, dim, 0);
    const Cone c = f.cone();
    Vec x(dim);
    for (int k = 0; k < dim; ++k) x[k] = uni(rng, -1, 1);
    const Vec y = sample_interior(rng, c, 0.5, 1.5);
    for (int j = 0; j < dim; ++j) {
      Vec xp = x;
      Vec xm = x;
      xp[j] += h;
      xm[j] -= h;
      const Complex fd = (evaluate(f, make_tube_point(c, xp, y)) - evaluate(f, make_tube_point(c, xm, y))) / (2.0 * h);
      MultiIndex a(static_cast<std::size_t>(dim), 0);
      a[static_cast<std::size_t>(j)] = 1;
      CHECK(rel(evaluate_derivative(f, a, make_tube_point(c, x, y)), fd) <= 1e-5);
    }
  }
}

TEST_CASE("shifted densities evaluate through the shift") {
  // g(xi) = e^{-(xi - 1)} on [1, inf): G(z) = e^{iz} F(z).
  const Weight w(0, Gauge::euclidean(kHalf));
  SpectralDensity g = catalogue::exponential(kHalf, v1(1.0));
  g.shift = v1(1.0);
  const HSFunction gs(g, w);
  const HSFunction f(catalogue::exponential(kHalf, v1(1.0)), w);
  const TubePoint z = make_tube_point(kHalf, v1(0.4), v1(0.8));
  const Complex zz = z.z()[0];
  CHECK(rel(evaluate(gs, z), std::exp(kI * zz) * evaluate(f, z)) <= 1e-8);
  CHECK(rel(hs_norm(gs), hs_norm(f)) <= 1e-12);
}

TEST_CASE("catalogue densities on every cone") {
  for (const Cone& c : {kHalf, Cone::orthant(2), Cone::lorentz(2), Cone::lorentz(3)}) {
    const Vec b = c.dim() == 3 ? v3(0, 0, 1.5) : (c.dim() == 2 ? v2(0.2, 1.5) : v1(1.5));
    const HSFunction f(catalogue::exponential(c, b), Weight(0, Gauge::euclidean(c)));
    AdaptiveOptions o;
    o.decay_hint = 2.0 * interior_depth(c, b);
    o.tol = 1e-10;
    const Complex ref = adaptive_reference(c, [&](std::span<const double> xi) {
      return Complex(std::norm(f.density().value(Eigen::Map<const Vec>(xi.data(), c.dim()))));
    }, o);
    CHECK(rel(hs_norm(f) * hs_norm(f), ref) <= 1e-7);
  }
  const HSFunction box(catalogue::truncated_indicator(Cone::orthant(2), 1.5), Weight(0, Gauge::euclidean(Cone::orthant(2))));
  CHECK(rel(hs_norm(box) * hs_norm(box), 2.25) <= 1e-12);
}
