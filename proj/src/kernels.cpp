#include "tubehs/kernels.hpp"

#include <cmath>
#include <limits>

#include "tubehs/error.hpp"

namespace tubehs {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_point(const Cone& cone, const TubePoint& p, const char* what) {
  if (p.x.size() != cone.dim() || p.y.size() != cone.dim()) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " dimension does not match cone");
  }
  require_interior(cone, p.y, what);
}

void check_index(const Cone& cone, const MultiIndex& a) {
  if (static_cast<int>(a.size()) != cone.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "multi-index length does not match cone");
  }
  for (int v : a) {
    if (v < 0) throw Error(ErrorCode::InvalidArgument, "negative multi-index entry");
  }
}

/// Integral of m(xi) e^{i<z - conj w, xi>} / w_n(xi) on a rule sized for the pair.
template <class Monomial>
Complex kernel_integral(const KernelParams& p, const TubePoint& z, const TubePoint& w, int degree, Monomial&& m) {
  const Cone& cone = p.cone();
  check_point(cone, z, "z");
  check_point(cone, w, "w");
  const Vec dx = z.x - w.x;
  const Vec sy = z.y + w.y;
  RuleRequest req;
  req.decay_scale = interior_depth(cone, sy);
  req.degree = degree;
  req.frequency = dx.norm() + sy.norm();
  req.target = p.target;
  const auto rule = p.cache->get(req);
  const auto d = static_cast<std::size_t>(cone.dim());
  const Weight& wt = p.weight;
  return integrate(*rule, [&](std::span<const double> xi) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      re += dx[static_cast<Eigen::Index>(i)] * xi[i];
      im += sy[static_cast<Eigen::Index>(i)] * xi[i];
    }
    return m(xi) * std::exp(Complex(-im, re)) / wt.value(xi);
  });
}

}  // namespace

KernelParams::KernelParams(Weight w, double t, std::shared_ptr<RuleCache> c)
    : weight(std::move(w)), target(t), cache(std::move(c)) {
  if (!(target > 0.0)) throw Error(ErrorCode::InvalidArgument, "target must be positive");
  if (!cache) cache = std::make_shared<RuleCache>(weight.cone());
}

Complex kernel_eval(const KernelParams& p, const TubePoint& z, const TubePoint& w) {
  return kernel_integral(p, z, w, 0, [](std::span<const double>) { return Complex(1.0); });
}

double kernel_diag(const KernelParams& p, const TubePoint& z) {
  return kernel_integral(p, z, z, 0, [](std::span<const double>) { return Complex(1.0); }).real();
}

Complex kernel_halfplane_closed(Complex z, Complex w) {
  if (!(z.imag() > 0.0) || !(w.imag() > 0.0)) {
    throw Error(ErrorCode::NotInHalfPlane, "closed-form kernel needs Im z > 0 and Im w > 0");
  }
  return kI / (z - std::conj(w));
}

Complex kernel_derivative(const KernelParams& p, const MultiIndex& alpha, const MultiIndex& beta, const TubePoint& z,
                          const TubePoint& w) {
  check_index(p.cone(), alpha);
  check_index(p.cone(), beta);
  int degree = 0;
  for (std::size_t i = 0; i < alpha.size(); ++i) degree += alpha[i] + beta[i];
  return kernel_integral(p, z, w, degree, [&](std::span<const double> xi) {
    Complex m = 1.0;
    for (std::size_t i = 0; i < xi.size(); ++i) {
      for (int k = 0; k < alpha[i]; ++k) m *= kI * xi[i];
      for (int k = 0; k < beta[i]; ++k) m *= -kI * xi[i];
    }
    return m;
  });
}

HSFunction kernel_function(const KernelParams& p, const TubePoint& w) {
  const Cone& cone = p.cone();
  check_point(cone, w, "w");
  Envelope env;
  env.decay = interior_depth(cone, w.y);
  env.frequency = w.x.norm() + w.y.norm();
  const Vec wx = w.x;
  const Vec wy = w.y;
  const Weight wt = p.weight;
  auto density = make_density(
      cone.dim(),
      [wx, wy, wt](std::span<const double> xi) {
        // e^{-i<conj w, xi>} = e^{-<y, xi>} e^{-i<x, xi>}
        double re = 0.0;
        double im = 0.0;
        for (std::size_t i = 0; i < xi.size(); ++i) {
          re += wx[static_cast<Eigen::Index>(i)] * xi[i];
          im += wy[static_cast<Eigen::Index>(i)] * xi[i];
        }
        return std::exp(Complex(-im, -re)) / wt.value(xi);
      },
      env, "kernel");
  return HSFunction(std::move(density), p.weight, p.target, p.cache);
}

ReproduceResult reproduce_check(const HSFunction& f, const KernelParams& p, const TubePoint& w) {
  if (!same_space(f.weight(), p.weight)) {
    throw Error(ErrorCode::ParameterMismatch, "function and kernel live in different spaces");
  }
  ReproduceResult r;
  r.lhs = evaluate(f, w);
  r.rhs = hs_inner(f, kernel_function(p, w));
  const double scale = std::max(std::abs(r.lhs), std::numeric_limits<double>::min());
  r.rel_err = std::abs(r.lhs - r.rhs) / scale;
  return r;
}

ReproduceResult reproduce_check(const HSFunction& f, const TubePoint& w) {
  return reproduce_check(f, KernelParams(f.weight(), f.target(), f.cache()), w);
}

CMat gram_matrix(const KernelParams& p, const std::vector<TubePoint>& points) {
  const auto m = static_cast<Eigen::Index>(points.size());
  CMat g(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index l = 0; l <= j; ++l) {
      const Complex v = kernel_eval(p, points[static_cast<std::size_t>(l)], points[static_cast<std::size_t>(j)]);
      g(j, l) = v;
      g(l, j) = std::conj(v);
    }
    g(j, j) = g(j, j).real();
  }
  return g;
}

}  // namespace tubehs
