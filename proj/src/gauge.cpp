#include "tubehs/gauge.hpp"

#include <cmath>
#include <string>

#include "tubehs/error.hpp"

namespace tubehs {

namespace {

std::span<const double> as_span(const Vec& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

void require_dual(const Cone& cone, const Vec& xi) {
  if (!contains_dual(cone, xi)) throw Error(ErrorCode::OutsideDualCone, "xi is not in the dual cone");
}

}  // namespace

Gauge::Gauge(GaugeKind kind, Cone cone, Vec direction)
    : kind_(kind), cone_(std::move(cone)), direction_(std::move(direction)) {}

Gauge Gauge::euclidean(const Cone& cone) { return Gauge(GaugeKind::Euclidean, cone, Vec()); }

Gauge Gauge::linear(const Cone& cone, const Vec& direction) {
  if (direction.size() != cone.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "gauge direction length does not match cone");
  }
  // <e, xi> > 0 on Omega* \ {0} exactly when e is interior to Omega.
  require_interior(cone, direction, "gauge direction");
  return Gauge(GaugeKind::Linear, cone, direction);
}

double Gauge::value(std::span<const double> xi) const noexcept {
  double s = 0.0;
  if (kind_ == GaugeKind::Euclidean) {
    for (double a : xi) s += a * a;
    return std::sqrt(s);
  }
  for (std::size_t i = 0; i < xi.size(); ++i) s += direction_[static_cast<Eigen::Index>(i)] * xi[i];
  return s;
}

Weight::Weight(int order, Gauge gauge) : order_(order), gauge_(std::move(gauge)) {
  if (order < 0) throw Error(ErrorCode::InvalidArgument, "Sobolev order must be nonnegative");
}

double Weight::from_rho(double rho) const noexcept {
  const double r2 = rho * rho;
  double acc = 1.0;
  for (int k = 0; k < order_; ++k) acc = acc * r2 + 1.0;
  return acc;
}

double Weight::value(std::span<const double> xi) const noexcept { return from_rho(gauge_.value(xi)); }

double gauge_eval(const Gauge& g, const Vec& xi) {
  if (xi.size() != g.cone().dim()) throw Error(ErrorCode::DimensionMismatch, "xi length does not match cone");
  require_dual(g.cone(), xi);
  return std::max(0.0, g.value(as_span(xi)));
}

double weight_eval(const Weight& w, const Vec& xi) {
  return w.from_rho(gauge_eval(w.gauge(), xi));
}

double reflected_weight_eval(const Weight& w, const Vec& xi) {
  const Cone& cone = w.cone();
  if (xi.size() != cone.dim()) throw Error(ErrorCode::DimensionMismatch, "xi length does not match cone");
  if (xi.isZero(0.0)) return 1.0;
  if (contains_dual(cone, xi)) return w.value(as_span(xi));
  const Vec neg = -xi;
  if (contains_dual(cone, neg)) return w.value(as_span(neg));
  throw Error(ErrorCode::OutsideSpectralSet, "xi lies in neither Omega* nor -Omega*");
}

bool same_space(const Weight& a, const Weight& b) noexcept {
  const Gauge& ga = a.gauge();
  const Gauge& gb = b.gauge();
  if (a.order() != b.order() || ga.kind() != gb.kind() || a.cone().dim() != b.cone().dim()) return false;
  if (ga.cone().kind() != gb.cone().kind()) return false;
  if (ga.kind() == GaugeKind::Linear && (ga.direction() - gb.direction()).norm() != 0.0) return false;
  if (ga.cone().generators().size() != gb.cone().generators().size()) return false;
  return ga.cone().generators().size() == 0 ||
         (ga.cone().generators() - gb.cone().generators()).norm() == 0.0;
}

}  // namespace tubehs
