#include "tubehs/quadrature.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <climits>
#include <cmath>
#include <mutex>
#include <numbers>
#include <queue>
#include <string>

#include "tubehs/error.hpp"

namespace tubehs {

namespace {

constexpr int kGaussPoints = 16;
constexpr double kMaxPanelPhase = 16.0;   // max (frequency or decay) * panel width
constexpr double kOscillationCap = 2e4;  // max frequency * truncation radius
constexpr std::size_t kMaxNodes = 6'000'000;
constexpr int kGradingLevels = 6;
constexpr double kGradingRatio = 0.2;

struct GaussLegendre {
  std::array<double, kGaussPoints> x{};
  std::array<double, kGaussPoints> w{};
};

const GaussLegendre& gauss_legendre() {
  static const GaussLegendre rule = [] {
    GaussLegendre gl;
    const int n = kGaussPoints;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      gl.x[static_cast<std::size_t>(i)] = x;
      gl.w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return gl;
  }();
  return rule;
}

/// e^{-cR} sum_j k!/j! R^j / c^{k+1-j}: integral of t^k e^{-ct} over [R, inf).
double upper_moment(double c, int k, double r) {
  if (r <= 0.0) return std::tgamma(k + 1.0) / std::pow(c, k + 1);
  // Accumulate from j = k downwards: term_j = k!/j! R^j / c^{k+1-j}.
  double term = std::pow(r, k) / c;
  double acc = term;
  for (int j = k - 1; j >= 0; --j) {
    // term_j = term_{j+1} * (j+1) / (R c)
    term = term * (j + 1) / (r * c);
    acc += term;
  }
  return std::exp(-c * r) * acc;
}

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

/// Integral of e^{-ct}(1+t)^p t^jac over [R, inf) (R = 0 gives the total).
double reference_tail(double c, int p, int jac, double r) {
  double acc = 0.0;
  for (int k = 0; k <= p; ++k) {
    const int m = k + jac;
    double moment;
    if (r <= 0.0) {
      moment = std::tgamma(m + 1.0) / std::pow(c, m + 1);
    } else {
      moment = upper_moment(c, m, r);
    }
    acc += binomial(p, k) * moment;
  }
  return acc;
}

double truncation_radius(double c, int p, int jac, double tail_target) {
  const double total = reference_tail(c, p, jac, 0.0);
  double hi = std::max(1.0, static_cast<double>(p + jac + 1)) / c;
  while (reference_tail(c, p, jac, hi) / total > tail_target) hi *= 2.0;
  double lo = hi / 2.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (reference_tail(c, p, jac, mid) / total > tail_target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

struct Rule1D {
  std::vector<double> t;
  std::vector<double> w;
};

Rule1D radial_rule(double decay, double frequency, double length, bool graded, int refinement) {
  std::vector<double> breaks{0.0};
  double t = 0.0;
  const double freq_cap = frequency > 0.0 ? kMaxPanelPhase / frequency : INFINITY;
  const double decay_cap = decay > 0.0 ? kMaxPanelPhase / decay : INFINITY;
  while (t < length) {
    const double h = std::min({0.5 + 0.5 * t, freq_cap, decay_cap});
    double b = t + h;
    if (b >= length || length - b < 0.1 * h) b = length;
    breaks.push_back(b);
    t = b;
  }
  if (graded && breaks.size() > 1) {
    std::vector<double> g{0.0};
    for (int k = kGradingLevels; k >= 1; --k) g.push_back(breaks[1] * std::pow(kGradingRatio, k));
    g.insert(g.end(), breaks.begin() + 1, breaks.end());
    breaks = std::move(g);
  }
  const int split = 1 << std::max(refinement, 0);
  const GaussLegendre& gl = gauss_legendre();
  Rule1D r;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a0 = breaks[i];
    const double step = (breaks[i + 1] - a0) / split;
    for (int s = 0; s < split; ++s) {
      const double a = a0 + s * step;
      const double half = 0.5 * step;
      const double mid = a + half;
      for (int k = 0; k < kGaussPoints; ++k) {
        r.t.push_back(mid + half * gl.x[static_cast<std::size_t>(k)]);
        r.w.push_back(half * gl.w[static_cast<std::size_t>(k)]);
      }
    }
  }
  return r;
}

/// |rule - exact| / exact for e^{-ct}(1+t)^p t^jac on [0, T].
double radial_rule_error(const Rule1D& r, double c, int p, int jac, double length) {
  if (c <= 0.0) return 0.0;
  const double exact = reference_tail(c, p, jac, 0.0) - reference_tail(c, p, jac, length);
  double sum = 0.0;
  for (std::size_t i = 0; i < r.t.size(); ++i) {
    const double t = r.t[i];
    sum += r.w[i] * std::exp(-c * t) * std::pow(1.0 + t, p) * std::pow(t, jac);
  }
  return std::abs(sum - exact) / exact;
}

int angular_points(double s, double frequency) {
  // Fourier modes of e^{i x cos(phi)} decay past |k| = x + O(x^{1/3}).
  const double x = s * frequency;
  return std::max(static_cast<int>(std::ceil(x + 10.0 * std::cbrt(x) + 24.0)), 32);
}

}  // namespace

QuadratureRule build_rule(const Cone& cone, const RuleRequest& req) {
  const bool has_support = req.support_radius.has_value();
  if (has_support && !(*req.support_radius > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "support radius must be positive");
  }
  if (!(req.decay_scale > 0.0) && !has_support) {
    throw Error(ErrorCode::InvalidArgument, "decay_scale must be positive unless a support radius is given");
  }
  if (req.degree < 0) throw Error(ErrorCode::InvalidArgument, "degree must be nonnegative");
  if (!(req.target > 0.0) || req.target >= 1.0) throw Error(ErrorCode::InvalidArgument, "target must be in (0, 1)");
  if (req.frequency < 0.0 || !std::isfinite(req.frequency)) {
    throw Error(ErrorCode::InvalidArgument, "frequency must be finite and nonnegative");
  }
  if (cone.kind() == ConeKind::Lorentz && cone.dim() > 3) {
    throw Error(ErrorCode::UnsupportedCone, "lorentz cone above d = 3");
  }

  const bool lorentz3 = !cone.polyhedral();
  const int radial_dims = lorentz3 ? 2 : cone.dim();
  const int jac = lorentz3 ? 1 : 0;
  const double c = std::max(req.decay_scale, 0.0);
  const int p_eff = req.degree + radial_dims - 1;

  double tail = 0.0;
  double length = INFINITY;
  if (c > 0.0) {
    const double relative_size = req.frequency > c ? c / req.frequency : 1.0;
    const double tail_target = 1e-2 * req.target * relative_size / radial_dims;
    length = truncation_radius(c, p_eff, jac, tail_target);
    tail = reference_tail(c, p_eff, jac, length) / reference_tail(c, p_eff, jac, 0.0) * radial_dims;
  }
  if (has_support && *req.support_radius < length) {
    length = *req.support_radius;
    tail = 0.0;
  }
  if (req.frequency * length > kOscillationCap) {
    throw Error(ErrorCode::OscillationBudgetExceeded,
                "frequency * radius = " + std::to_string(req.frequency * length) + " exceeds cap " +
                    std::to_string(kOscillationCap));
  }

  const bool graded = !lorentz3 && cone.dim() >= 2;
  const Rule1D radial = radial_rule(c, req.frequency, length, graded, req.refinement);
  const Rule1D radial_s = lorentz3 ? radial_rule(c, req.frequency, length, false, req.refinement) : radial;

  QuadratureRule rule;
  rule.dim = cone.dim();
  rule.decay_scale = c;
  rule.order_budget = req.degree;
  rule.frequency = req.frequency;
  rule.truncation = length;

  const double quad_err = radial_rule_error(radial, c, p_eff, 0, length) * radial_dims;
  rule.est_rel_error = std::max(tail + quad_err, 1e-15);

  if (lorentz3) {
    std::size_t count = 0;
    for (double s : radial_s.t) count += static_cast<std::size_t>(angular_points(s, req.frequency));
    count *= radial.t.size();
    if (count > kMaxNodes) {
      throw Error(ErrorCode::TargetUnreachable, "lorentz rule needs " + std::to_string(count) + " nodes");
    }
    rule.nodes.reserve(3 * count);
    rule.weights.reserve(count);
    for (std::size_t i = 0; i < radial_s.t.size(); ++i) {
      const double s = radial_s.t[i];
      const int m = angular_points(s, req.frequency);
      const double dphi = 2.0 * std::numbers::pi / m;
      for (int k = 0; k < m; ++k) {
        const double phi = k * dphi;
        const double cx = s * std::cos(phi);
        const double cy = s * std::sin(phi);
        for (std::size_t j = 0; j < radial.t.size(); ++j) {
          rule.nodes.insert(rule.nodes.end(), {cx, cy, s + radial.t[j]});
          rule.weights.push_back(radial_s.w[i] * radial.w[j] * s * dphi);
        }
      }
    }
    return rule;
  }

  const int d = cone.dim();
  const std::size_t per_axis = radial.t.size();
  double count = 1.0;
  for (int i = 0; i < d; ++i) count *= static_cast<double>(per_axis);
  if (count > static_cast<double>(kMaxNodes)) {
    throw Error(ErrorCode::TargetUnreachable, "rule needs " + std::to_string(count) + " nodes");
  }
  const DualConeView view = dual_view(cone);
  const Mat& a = view.ray_matrix;
  const double jacobian = std::abs(a.determinant());
  const auto total = static_cast<std::size_t>(count);
  rule.nodes.resize(total * static_cast<std::size_t>(d));
  rule.weights.resize(total);
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  for (std::size_t n = 0; n < total; ++n) {
    double w = jacobian;
    for (int r = 0; r < d; ++r) w *= radial.w[idx[static_cast<std::size_t>(r)]];
    for (int r = 0; r < d; ++r) {
      double xi = 0.0;
      for (int k = 0; k < d; ++k) xi += a(r, k) * radial.t[idx[static_cast<std::size_t>(k)]];
      rule.nodes[n * static_cast<std::size_t>(d) + static_cast<std::size_t>(r)] = xi;
    }
    rule.weights[n] = w;
    for (int r = d - 1; r >= 0; --r) {
      if (++idx[static_cast<std::size_t>(r)] < per_axis) break;
      idx[static_cast<std::size_t>(r)] = 0;
    }
  }
  return rule;
}

QuadratureRule build_rule(const Cone& cone, double decay_scale, int degree, double target) {
  RuleRequest req;
  req.decay_scale = decay_scale;
  req.degree = degree;
  req.target = target;
  return build_rule(cone, req);
}

Complex integrate(const QuadratureRule& rule, const Integrand& phi) {
  // Neumaier summation on each component.
  double re = 0.0, re_c = 0.0, im = 0.0, im_c = 0.0;
  auto add = [](double& sum, double& comp, double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  };
  for (std::size_t j = 0; j < rule.size(); ++j) {
    const Complex v = phi(rule.node(j));
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw Error(ErrorCode::NonFiniteIntegrand, "integrand is not finite at node " + std::to_string(j));
    }
    add(re, re_c, rule.weights[j] * v.real());
    add(im, im_c, rule.weights[j] * v.imag());
  }
  return {re + re_c, im + im_c};
}

nlohmann::json rule_to_json(const QuadratureRule& rule) {
  return {{"dim", rule.dim},
          {"decay_scale", rule.decay_scale},
          {"order_budget", rule.order_budget},
          {"frequency", rule.frequency},
          {"truncation", rule.truncation},
          {"est_rel_error", rule.est_rel_error},
          {"nodes", rule.nodes},
          {"weights", rule.weights}};
}

QuadratureRule rule_from_json(const nlohmann::json& j) {
  QuadratureRule rule;
  rule.dim = j.at("dim").get<int>();
  rule.decay_scale = j.at("decay_scale").get<double>();
  rule.order_budget = j.at("order_budget").get<int>();
  rule.frequency = j.at("frequency").get<double>();
  rule.truncation = j.at("truncation").get<double>();
  rule.est_rel_error = j.at("est_rel_error").get<double>();
  rule.nodes = j.at("nodes").get<std::vector<double>>();
  rule.weights = j.at("weights").get<std::vector<double>>();
  if (rule.dim < 1 || rule.nodes.size() != rule.weights.size() * static_cast<std::size_t>(rule.dim)) {
    throw Error(ErrorCode::InvalidArgument, "inconsistent rule JSON");
  }
  return rule;
}

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod (7, 15) reference integration.

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  Complex value;
  double mass;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

/// An integrand value together with the absolute mass behind it. For nested
/// integrals the mass is that of the inner integral, not |value|, so that
/// cancellation inside a slice does not shrink the outer error scale.
struct Sample {
  Complex value;
  double mass;
};

using Scalar1D = std::function<Sample(double)>;

Segment gk15(const Scalar1D& g, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const Sample fc = g(mid);
  Complex kron = fc.value * kWgk[7];
  Complex gauss = fc.value * kWg[3];
  double mass = fc.mass * kWgk[7];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const Sample f1 = g(mid - dx);
    const Sample f2 = g(mid + dx);
    kron += (f1.value + f2.value) * kWgk[j];
    mass += (f1.mass + f2.mass) * kWgk[j];
    if (j % 2 == 1) gauss += (f1.value + f2.value) * kWg[j / 2];
  }
  Segment s{a, b, kron * half, mass * std::abs(half), std::abs((kron - gauss) * half)};
  return s;
}

struct AdaptiveResult {
  Complex value;
  double mass;
};

/// Global adaptive bisection until error <= max(rel_tol * |I|, mass_tol * mass, abs_tol).
AdaptiveResult adapt(const Scalar1D& g, double a, double b, double rel_tol, double mass_tol, double abs_tol,
                     int max_intervals) {
  std::priority_queue<Segment> heap;
  heap.push(gk15(g, a, b));
  Complex total = heap.top().value;
  double err = heap.top().error;
  double mass = heap.top().mass;
  int intervals = 1;
  // Far-tail slices underflow into subnormals, where error estimates are noise.
  constexpr double kAbsFloor = 1e-280;
  while (err > std::max({rel_tol * std::abs(total), mass_tol * mass, abs_tol, kAbsFloor})) {
    if (intervals >= max_intervals) {
      throw Error(ErrorCode::NoConvergence,
                  "adaptive reference exceeded " + std::to_string(max_intervals) + " intervals");
    }
    Segment worst = heap.top();
    heap.pop();
    const double m = 0.5 * (worst.a + worst.b);
    Segment left = gk15(g, worst.a, m);
    Segment right = gk15(g, m, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    mass += left.mass + right.mass - worst.mass;
    heap.push(left);
    heap.push(right);
    ++intervals;
    if (err < 0.0) err = 0.0;
  }
  // Recompute sums from the leaves to shed accumulated drift.
  Complex sum = 0.0;
  double msum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    msum += heap.top().mass;
    heap.pop();
  }
  return {sum, msum};
}

/// Integral over [0, inf) (or [0, r] with support) via an adaptive rule.
AdaptiveResult adapt_radial(const Scalar1D& f, const AdaptiveOptions& opt, double rel_tol, double mass_tol,
                            double abs_tol) {
  if (opt.support_radius) {
    return adapt(f, 0.0, *opt.support_radius, rel_tol, mass_tol, abs_tol, opt.max_intervals);
  }
  const double scale = 1.0 / opt.decay_hint;
  Scalar1D g = [&](double t) -> Sample {
    const double one_minus = 1.0 - t;
    const double xi = scale * t / one_minus;
    const Sample v = f(xi);
    if (v.value == Complex(0.0) && v.mass == 0.0) return {0.0, 0.0};
    const double jac = scale / (one_minus * one_minus);
    return {v.value * jac, v.mass * jac};
  };
  return adapt(g, 0.0, 1.0, rel_tol, mass_tol, abs_tol, opt.max_intervals);
}

}  // namespace

Complex adaptive_reference(const Cone& cone, const Integrand& phi, const AdaptiveOptions& opt) {
  if (!(opt.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  if (!opt.support_radius && !(opt.decay_hint > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "decay_hint must be positive");
  }
  auto checked = [&](std::span<const double> xi) -> Sample {
    const Complex v = phi(xi);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw Error(ErrorCode::NonFiniteIntegrand, "integrand is not finite");
    }
    return {v, std::abs(v)};
  };
  auto sample = [](const AdaptiveResult& r, double factor) -> Sample { return {r.value * factor, r.mass * factor}; };
  const int d = cone.dim();
  const DualConeView view = dual_view(cone);
  const Mat a = view.ray_matrix;
  const double jacobian = cone.polyhedral() ? std::abs(a.determinant()) : 1.0;
  std::vector<double> eta(static_cast<std::size_t>(d), 0.0);
  std::vector<double> xi(static_cast<std::size_t>(d), 0.0);

  // One nested pass. Inner slices are solved to a mass-relative tolerance plus
  // an absolute one; slices far below the total need not be resolved finely.
  auto pass = [&](double tol, double inner_abs) -> AdaptiveResult {
    // Each level sits below the noise it hands to the level above.
    auto level_tol = [tol](int depth) { return std::max(tol * std::pow(1e-2, depth), 1e-14); };
    const double outer_mass_tol = tol * 1e-3;
    if (!cone.polyhedral()) {
      // xi = (s cos t, s sin t, s + tau), d xi = s ds dt dtau.
      Scalar1D over_s = [&](double s) -> Sample {
        Scalar1D over_tau = [&](double tau) -> Sample {
          Scalar1D over_phi = [&](double t) -> Sample {
            const std::array<double, 3> p{s * std::cos(t), s * std::sin(t), s + tau};
            return checked(p);
          };
          return sample(adapt(over_phi, 0.0, 2.0 * std::numbers::pi, 0.0, level_tol(2), inner_abs, opt.max_intervals),
                        1.0);
        };
        return sample(adapt_radial(over_tau, opt, 0.0, level_tol(1), inner_abs), s);
      };
      return adapt_radial(over_s, opt, tol, outer_mass_tol, 0.0);
    }
    std::function<Sample(int)> level = [&](int r) -> Sample {
      Scalar1D f = [&, r](double t) -> Sample {
        eta[static_cast<std::size_t>(r)] = t;
        if (r + 1 < d) return level(r + 1);
        for (int i = 0; i < d; ++i) {
          double sum = 0.0;
          for (int k = 0; k < d; ++k) sum += a(i, k) * eta[static_cast<std::size_t>(k)];
          xi[static_cast<std::size_t>(i)] = sum;
        }
        return checked(xi);
      };
      if (r == 0) {
        const AdaptiveResult res = adapt_radial(f, opt, tol, outer_mass_tol, 0.0);
        return {res.value, res.mass};
      }
      return sample(adapt_radial(f, opt, 0.0, level_tol(r), inner_abs), 1.0);
    };
    const Sample top = level(0);
    return {top.value, top.mass};
  };

  if (d == 1) return jacobian * pass(opt.tol, 0.0).value;
  const AdaptiveResult pilot = pass(std::max(opt.tol, 1e-5), 0.0);
  // Inner errors are integrated over at most d-1 chart coordinates of length
  // about 40 / decay each.
  const double length = opt.support_radius ? *opt.support_radius : 40.0 / opt.decay_hint;
  const double spread = cone.polyhedral() ? std::pow(length, d - 1) : 2.0 * std::numbers::pi * length * length;
  const double inner_abs = 1e-2 * opt.tol * pilot.mass / spread;
  return jacobian * pass(opt.tol, inner_abs).value;
}

// ---------------------------------------------------------------------------

std::shared_ptr<const QuadratureRule> RuleCache::get(const RuleRequest& request) {
  RuleRequest bucketed = request;
  int decay_key = INT_MIN;
  if (request.decay_scale > 0.0) {
    decay_key = static_cast<int>(std::floor(4.0 * std::log2(request.decay_scale)));
    bucketed.decay_scale = std::exp2(decay_key / 4.0);
  } else {
    bucketed.decay_scale = 0.0;
  }
  int freq_key = INT_MIN;
  if (request.frequency > 0.0) {
    freq_key = std::max(static_cast<int>(std::ceil(4.0 * std::log2(request.frequency))), -16);
    bucketed.frequency = std::exp2(freq_key / 4.0);
  } else {
    bucketed.frequency = 0.0;
  }
  const long long support_key =
      request.support_radius ? std::bit_cast<long long>(*request.support_radius) : -1LL;
  const Key key{decay_key, freq_key, request.degree, std::bit_cast<long long>(request.target), support_key,
                request.refinement};
  {
    std::shared_lock lock(mutex_);
    if (auto it = rules_.find(key); it != rules_.end()) return it->second;
  }
  auto rule = std::make_shared<const QuadratureRule>(build_rule(cone_, bucketed));
  std::unique_lock lock(mutex_);
  auto [it, inserted] = rules_.emplace(key, rule);
  return it->second;
}

std::size_t RuleCache::size() const {
  std::shared_lock lock(mutex_);
  return rules_.size();
}

}  // namespace tubehs
