#include "tubehs/carleson.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "tubehs/error.hpp"

namespace tubehs {

namespace {

constexpr double kMaxCondition = 1e12;
constexpr double kRegularization = 1e-12;
// Cauchy-Schwarz equality cases sit at ratio 1 up to quadrature error.
constexpr double kViolationSlack = 1e-8;

}  // namespace

void validate_measure(const Cone& cone, const DiscreteMeasure& mu) {
  if (mu.points.size() != mu.masses.size()) {
    throw Error(ErrorCode::InvalidArgument, "measure has mismatched points and masses");
  }
  for (std::size_t m = 0; m < mu.size(); ++m) {
    if (!(mu.masses[m] > 0.0) || !std::isfinite(mu.masses[m])) {
      throw Error(ErrorCode::InvalidArgument, "measure masses must be positive and finite");
    }
    const TubePoint& z = mu.points[m];
    if (z.x.size() != cone.dim() || z.y.size() != cone.dim()) {
      throw Error(ErrorCode::DimensionMismatch, "measure point dimension does not match cone");
    }
    require_interior(cone, z.y, "measure point");
  }
}

double testing_ratio(const KernelParams& p, const DiscreteMeasure& mu, const TubePoint& w) {
  validate_measure(p.cone(), mu);
  double acc = 0.0;
  for (std::size_t m = 0; m < mu.size(); ++m) acc += mu.masses[m] * std::norm(kernel_eval(p, mu.points[m], w));
  return acc / kernel_diag(p, w);
}

CMat embedding_form(const KernelParams& p, const DiscreteMeasure& mu, const std::vector<TubePoint>& frame) {
  validate_measure(p.cone(), mu);
  const auto f = static_cast<Eigen::Index>(frame.size());
  const auto n = static_cast<Eigen::Index>(mu.size());
  // E_{mj} = K(z_m, w_j)
  CMat e(n, f);
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index j = 0; j < f; ++j) {
      e(m, j) = kernel_eval(p, mu.points[static_cast<std::size_t>(m)], frame[static_cast<std::size_t>(j)]);
    }
  }
  CMat out = CMat::Zero(f, f);
  for (Eigen::Index m = 0; m < n; ++m) {
    const double mass = mu.masses[static_cast<std::size_t>(m)];
    for (Eigen::Index j = 0; j < f; ++j) {
      for (Eigen::Index l = 0; l < f; ++l) out(j, l) += mass * e(m, j) * std::conj(e(m, l));
    }
  }
  return out;
}

EmbeddingEstimate embedding_estimate(const KernelParams& p, const DiscreteMeasure& mu,
                                     const std::vector<TubePoint>& frame) {
  if (frame.empty()) throw Error(ErrorCode::InvalidArgument, "frame is empty");
  const CMat m = embedding_form(p, mu, frame);
  CMat g = gram_matrix(p, frame);
  const auto size = g.rows();
  EmbeddingEstimate out;
  out.regularization = kRegularization * g.trace().real() / static_cast<double>(size);
  g += out.regularization * CMat::Identity(size, size);

  Eigen::SelfAdjointEigenSolver<CMat> gs(g, Eigen::EigenvaluesOnly);
  const double lo = gs.eigenvalues().minCoeff();
  const double hi = gs.eigenvalues().maxCoeff();
  out.condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(out.condition <= kMaxCondition)) {
    throw Error(ErrorCode::GramIllConditioned,
                "frame Gram condition number " + std::to_string(out.condition) + " exceeds 1e12");
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<CMat> solver(m, g, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::GramIllConditioned, "generalized eigensolve failed");
  out.lambda = std::max(0.0, solver.eigenvalues().maxCoeff());
  return out;
}

SpectralCheckReport spectral_embedding_check(const KernelParams& p, const DiscreteMeasure& mu,
                                             const std::vector<SpectralDensity>& densities, double constant) {
  validate_measure(p.cone(), mu);
  if (!(constant > 0.0)) throw Error(ErrorCode::InvalidArgument, "candidate constant must be positive");
  SpectralCheckReport r;
  for (const SpectralDensity& d : densities) {
    const HSFunction f(d, p.weight, p.target, p.cache);
    double lhs = 0.0;
    for (std::size_t m = 0; m < mu.size(); ++m) lhs += mu.masses[m] * std::norm(evaluate(f, mu.points[m]));
    const double norm = hs_norm(f);
    const double rhs = constant * norm * norm;
    const double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    r.ratios.push_back(ratio);
    r.max_ratio = std::max(r.max_ratio, ratio);
    if (ratio > 1.0 + kViolationSlack) ++r.violations;
  }
  return r;
}

}  // namespace tubehs
