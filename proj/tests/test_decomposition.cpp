#include <map>

#include <doctest.h>

#include "support.hpp"
#include "tubehs/config.hpp"
#include "tubehs/decomposition.hpp"
#include "tubehs/error.hpp"
#include "tubehs/fourier_laplace.hpp"

using namespace tubehs;
using namespace tt;

namespace {

const Cone kHalf = Cone::orthant(1);

BoundaryGrid grid1(int n, double period, const std::function<Complex(double)>& u) {
  BoundaryGrid g{1, n, period, {}};
  for (int j = 0; j < n; ++j) g.samples.push_back(u(j * period / n));
  return g;
}

BoundaryGrid grid2(int n, double period, const std::function<Complex(double, double)>& u) {
  BoundaryGrid g{2, n, period, {}};
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) g.samples.push_back(u(j * period / n, l * period / n));
  }
  return g;
}

const Bin* find_bin(const std::vector<Bin>& bins, const std::vector<int>& k) {
  for (const Bin& b : bins) {
    if (b.k == k) return &b;
  }
  return nullptr;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

// Random band-limited data with spectrum in the dual cone and its negative.
BoundaryGrid random_cone_grid(Rng& rng, int dim, int n) {
  const int modes = 6;
  std::vector<std::pair<std::vector<int>, Complex>> terms;
  for (int m = 0; m < modes; ++m) {
    std::vector<int> k(static_cast<std::size_t>(dim));
    const int sign = m % 2 == 0 ? 1 : -1;
    for (int& v : k) v = sign * static_cast<int>(rng() % static_cast<unsigned>(n / 2 - 1));
    terms.emplace_back(k, Complex(uni(rng, -1, 1), uni(rng, -1, 1)));
  }
  const double period = 2.0 * kPi;
  if (dim == 1) {
    return grid1(n, period, [&](double x) {
      Complex s = 0.0;
      for (const auto& [k, c] : terms) s += c * std::exp(Complex(0.0, k[0] * x));
      return s;
    });
  }
  return grid2(n, period, [&](double x1, double x2) {
    Complex s = 0.0;
    for (const auto& [k, c] : terms) s += c * std::exp(Complex(0.0, k[0] * x1 + k[1] * x2));
    return s;
  });
}

}  // namespace

TEST_CASE("analyze_grid examples") {
  const Spectrum zero = analyze_grid(grid1(16, 2.0 * kPi, [](double) { return Complex(0.0); }));
  for (const Bin& b : zero.bins) CHECK(b.coeff == Complex(0.0));

  const Spectrum mode = analyze_grid(grid1(16, 2.0 * kPi, [](double x) { return std::exp(Complex(0.0, x)); }));
  CHECK(mode.bins.size() == 16);
  for (const Bin& b : mode.bins) {
    if (b.k[0] == 1) {
      CHECK(std::abs(b.coeff - 1.0) <= 1e-14);
    } else {
      CHECK(std::abs(b.coeff) <= 1e-14);
    }
  }

  const Spectrum cosine = analyze_grid(grid1(16, 2.0 * kPi, [](double x) { return Complex(2.0 * std::cos(x)); }));
  const Bin* p = find_bin(cosine.bins, {1});
  const Bin* m = find_bin(cosine.bins, {-1});
  REQUIRE(p);
  REQUIRE(m);
  CHECK(std::abs(std::abs(p->coeff) - std::abs(m->coeff)) <= 1e-15);
  CHECK(std::abs(p->coeff - 1.0) <= 1e-14);
  CHECK(std::abs(p->xi[0] - 1.0) <= 1e-15);

  BoundaryGrid bad = grid1(16, 1.0, [](double) { return Complex(1.0); });
  bad.samples[3] = Complex(NAN, 0.0);
  CHECK(code_of([&] { analyze_grid(bad); }) == ErrorCode::NonFiniteSamples);
  CHECK(code_of([] { validate_grid(BoundaryGrid{1, 6, 1.0, std::vector<Complex>(6)}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { validate_grid(BoundaryGrid{3, 4, 1.0, std::vector<Complex>(64)}); }) == ErrorCode::UnsupportedDimension);
}

TEST_CASE("split_spectrum examples") {
  const Spectrum cosine = analyze_grid(grid1(16, 2.0 * kPi, [](double x) { return Complex(2.0 * std::cos(x)); }));
  const SpectrumSplit s = split_spectrum(cosine, kHalf, 0.0);
  CHECK(s.residual_mass == 0.0);
  const Bin* p = find_bin(s.plus, {1});
  const Bin* m = find_bin(s.minus, {-1});
  REQUIRE(p);
  REQUIRE(m);
  CHECK(std::abs(p->coeff - 1.0) <= 1e-14);
  CHECK(std::abs(m->coeff - 1.0) <= 1e-14);
  CHECK(find_bin(s.minus, {0}) == nullptr);
  CHECK(find_bin(s.plus, {0}) != nullptr);
  CHECK(s.plus.size() + s.minus.size() + s.residual.size() == 16);

  const Spectrum off = analyze_grid(grid2(8, 2.0 * kPi, [](double x1, double x2) { return std::exp(Complex(0.0, x1 - x2)); }));
  CHECK(code_of([&] { split_spectrum(off, Cone::orthant(2), 0.0); }) == ErrorCode::SpectrumOutsideCones);
  const SpectrumSplit loose = split_spectrum(off, Cone::orthant(2), 1.0);
  REQUIRE(find_bin(loose.residual, {1, -1}));
  CHECK(std::abs(loose.residual_mass - 1.0) <= 1e-14);

  const Spectrum dc = analyze_grid(grid1(8, 1.0, [](double) { return Complex(3.0); }));
  const SpectrumSplit sd = split_spectrum(dc, kHalf, 0.0);
  CHECK(std::abs(find_bin(sd.plus, {0})->coeff - 3.0) <= 1e-14);
  for (const Bin& b : sd.minus) CHECK(std::abs(b.coeff) <= 1e-14);

  // Axis bins of the 2D orthant belong to plus.
  const Spectrum axis = analyze_grid(grid2(8, 2.0 * kPi, [](double x1, double) { return std::exp(Complex(0.0, 2.0 * x1)); }));
  const SpectrumSplit sa = split_spectrum(axis, Cone::orthant(2), 0.0);
  const Bin* a = find_bin(sa.plus, {2, 0});
  REQUIRE(a);
  CHECK(std::abs(a->coeff - 1.0) <= 1e-14);
}

TEST_CASE("extension examples") {
  const Spectrum cosine = analyze_grid(grid1(16, 2.0 * kPi, [](double x) { return Complex(2.0 * std::cos(x)); }));
  const Extension e = extend(split_spectrum(cosine, kHalf, 0.0));
  CHECK(rel(e.plus(v1(0.0), v1(1.0)), std::exp(-1.0)) <= 1e-14);
  CHECK(rel(e.minus(v1(0.0), v1(-1.0)), std::exp(-1.0)) <= 1e-14);
  const Complex z(0.4, 0.7);
  CHECK(rel(e.plus(v1(z.real()), v1(z.imag())), std::exp(kI * z)) <= 1e-14);
  CHECK(code_of([&] { e.plus(v1(0.0), v1(-1.0)); }) == ErrorCode::WrongTube);
  CHECK(code_of([&] { e.minus(v1(0.0), v1(1.0)); }) == ErrorCode::WrongTube);

  const Spectrum mode = analyze_grid(grid1(16, 2.0 * kPi, [](double x) { return std::exp(Complex(0.0, x)); }));
  const Extension only = extend(split_spectrum(mode, kHalf, 0.0));
  CHECK(std::abs(only.minus(v1(0.3), v1(-0.5))) <= 1e-14);
  double prev = 1.0;
  for (double t : {1.0, 0.1, 0.01, 0.001}) {
    const double gap = std::abs(only.plus(v1(0.3), v1(t)) - std::exp(Complex(0.0, 0.3)));
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev <= 1.1e-3);
}

TEST_CASE("norm identity examples") {
  const BoundaryGrid cosine = grid1(16, 2.0 * kPi, [](double x) { return Complex(2.0 * std::cos(x)); });
  const NormReport r0 = norm_identity_report(cosine, kHalf, Weight(0, Gauge::euclidean(kHalf)));
  CHECK(std::abs(r0.boundary_norm_sq - 2.0) <= 1e-13);
  CHECK(std::abs(r0.plus_norm_sq - 1.0) <= 1e-13);
  CHECK(std::abs(r0.minus_norm_sq - 1.0) <= 1e-13);
  CHECK(r0.defect <= 1e-13);
  const NormReport r1 = norm_identity_report(cosine, kHalf, Weight(1, Gauge::euclidean(kHalf)));
  CHECK(std::abs(r1.boundary_norm_sq - 4.0) <= 1e-13);
  CHECK(std::abs(r1.plus_norm_sq - 2.0) <= 1e-13);
  CHECK(std::abs(r1.minus_norm_sq - 2.0) <= 1e-13);
  CHECK(r1.defect <= 1e-13);
  const NormReport z = norm_identity_report(grid1(8, 1.0, [](double) { return Complex(0.0); }), kHalf,
                                            Weight(2, Gauge::euclidean(kHalf)));
  CHECK(z.boundary_norm_sq == 0.0);
  CHECK(z.plus_norm_sq == 0.0);
  CHECK(z.minus_norm_sq == 0.0);
  CHECK(z.defect == 0.0);
}

TEST_CASE("boundary limit error examples") {
  const Spectrum cosine = analyze_grid(grid1(16, 2.0 * kPi, [](double x) { return Complex(2.0 * std::cos(x)); }));
  const SpectrumSplit s = split_spectrum(cosine, kHalf, 0.0);
  const double e1 = boundary_limit_error(s, v1(1.0));
  CHECK(std::abs(e1 - std::pow(1.0 - std::exp(-1.0), 2)) <= 1e-14);
  CHECK(boundary_limit_error(s, v1(0.5)) < e1);
  CHECK(code_of([&] { boundary_limit_error(s, v1(0.0)); }) == ErrorCode::NotInInterior);

  const SpectrumSplit dc = split_spectrum(analyze_grid(grid1(8, 1.0, [](double) { return Complex(1.0); })), kHalf, 0.0);
  CHECK(boundary_limit_error(dc, v1(2.0)) <= 1e-28);
}

TEST_CASE("plus and minus parts add back to the samples") {
  Rng rng(61);
  for (int i = 0; i < 20; ++i) {
    const int dim = 1 + i % 2;
    const Cone c = Cone::orthant(dim);
    const BoundaryGrid g = random_cone_grid(rng, dim, dim == 1 ? 32 : 16);
    const SpectrumSplit s = split_spectrum(analyze_grid(g), c, 0.0);
    const std::vector<Complex> up = synthesize(s.plus, dim, g.points_per_axis);
    const std::vector<Complex> um = synthesize(s.minus, dim, g.points_per_axis);
    double scale = 0.0;
    for (const Complex& u : g.samples) scale = std::max(scale, std::abs(u));
    for (std::size_t j = 0; j < g.size(); ++j) CHECK(std::abs(up[j] + um[j] - g.samples[j]) <= 1e-12 * scale);
    const double total = s.total_energy;
    double parts = s.residual_mass;
    for (const Bin& b : s.plus) parts += std::norm(b.coeff);
    for (const Bin& b : s.minus) parts += std::norm(b.coeff);
    CHECK(std::abs(parts - total) <= 1e-12 * total);
  }
}

TEST_CASE("norm identity holds on random cone-supported data") {
  Rng rng(62);
  for (int i = 0; i < 50; ++i) {
    const int dim = 1 + i % 2;
    const Cone c = Cone::orthant(dim);
    const Weight w(i % 4, i % 3 == 0 ? Gauge::linear(c, Vec::Constant(dim, 1.0)) : Gauge::euclidean(c));
    const BoundaryGrid g = random_cone_grid(rng, dim, dim == 1 ? 32 : 16);
    const NormReport r = norm_identity_report(g, c, w);
    CHECK(r.defect <= 1e-10 * r.boundary_norm_sq);
  }
}

TEST_CASE("boundary limit error decreases to zero") {
  Rng rng(63);
  for (int i = 0; i < 10; ++i) {
    const int dim = 1 + i % 2;
    const Cone c = Cone::orthant(dim);
    const BoundaryGrid g = random_cone_grid(rng, dim, 16);
    const SpectrumSplit s = split_spectrum(analyze_grid(g), c, 0.0);
    const Vec y0 = sample_interior(rng, c, 0.5, 1.5);
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 10; ++k) {
      const double e = boundary_limit_error(s, Vec(std::ldexp(1.0, -k) * y0));
      CHECK(e <= prev);
      prev = e;
    }
    // Ten more halvings reach the asymptotic regime.
    const double tail = boundary_limit_error(s, Vec(std::ldexp(1.0, -20) * y0));
    CHECK(tail <= 1e-6 * s.total_energy);
  }
}

TEST_CASE("extension agrees with the Fourier-Laplace evaluation of the bin measure") {
  Rng rng(64);
  for (int i = 0; i < 10; ++i) {
    const int dim = 1 + i % 2;
    const Cone c = Cone::orthant(dim);
    const BoundaryGrid g = random_cone_grid(rng, dim, 16);
    const SpectrumSplit s = split_spectrum(analyze_grid(g), c, 0.0);
    const Extension e = extend(s);

    std::map<std::vector<int>, Complex> table;
    QuadratureRule rule;
    rule.dim = dim;
    double radius = 0.0;
    for (const Bin& b : s.plus) {
      table[b.k] = b.coeff;
      for (int k = 0; k < dim; ++k) rule.nodes.push_back(b.xi[k]);
      rule.weights.push_back(1.0);
      radius = std::max(radius, b.xi.maxCoeff());
    }
    rule.decay_scale = 0.0;
    rule.frequency = 1e6;
    rule.truncation = radius;
    const double step = 2.0 * kPi / g.period;
    Envelope env;
    env.support_radius = radius + 1.0;
    const SpectralDensity bins = make_density(dim, [table, step](std::span<const double> xi) {
      std::vector<int> k;
      for (double v : xi) k.push_back(static_cast<int>(std::lround(v / step)));
      const auto it = table.find(k);
      return it == table.end() ? Complex(0.0) : it->second;
    }, env, "bins");
    const HSFunction f(bins, Weight(0, Gauge::euclidean(c)));
    for (int j = 0; j < 5; ++j) {
      Vec x(dim);
      for (int k = 0; k < dim; ++k) x[k] = uni(rng, -3, 3);
      const Vec y = sample_interior(rng, c, 0.1, 1.0);
      CHECK(rel(evaluate(f, make_tube_point(c, x, y), rule), e.plus(x, y)) <= 1e-13);
    }
  }
}

TEST_CASE("CSV grids parse into the same spectrum") {
  const BoundaryGrid g = grid1(8, 2.0 * kPi, [](double x) { return std::exp(Complex(0.0, 2.0 * x)); });
  std::string text = "index,re,im\n";
  for (std::size_t j = g.size(); j-- > 0;) {
    char line[96];
    std::snprintf(line, sizeof line, "%zu,%.17g,%.17g\n", j, g.samples[j].real(), g.samples[j].imag());
    text += line;
  }
  const BoundaryGrid h = parse_grid_csv(text, 1, 8, 2.0 * kPi);
  CHECK(h.samples == g.samples);
}
