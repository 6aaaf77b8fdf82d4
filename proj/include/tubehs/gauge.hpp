#pragma once

#include <span>

#include "tubehs/cone.hpp"

namespace tubehs {

enum class GaugeKind { Euclidean, Linear };

/// Degree-one homogeneous gauge rho on Omega*: |xi| or <e, xi> with e in int Omega.
class Gauge {
 public:
  static Gauge euclidean(const Cone& cone);
  static Gauge linear(const Cone& cone, const Vec& direction);

  GaugeKind kind() const noexcept { return kind_; }
  const Cone& cone() const noexcept { return cone_; }
  const Vec& direction() const noexcept { return direction_; }

  /// rho(xi) without the membership check.
  double value(std::span<const double> xi) const noexcept;

 private:
  Gauge(GaugeKind kind, Cone cone, Vec direction);

  GaugeKind kind_;
  Cone cone_;
  Vec direction_;
};

/// w_n(xi) = sum_{k=0}^n rho(xi)^{2k}.
class Weight {
 public:
  Weight(int order, Gauge gauge);

  int order() const noexcept { return order_; }
  const Gauge& gauge() const noexcept { return gauge_; }
  const Cone& cone() const noexcept { return gauge_.cone(); }

  /// w_n(xi) without the membership check.
  double value(std::span<const double> xi) const noexcept;
  /// Horner evaluation of sum_{k<=n} r^k at r = rho^2.
  double from_rho(double rho) const noexcept;

  Weight with_order(int order) const { return Weight(order, gauge_); }

 private:
  int order_;
  Gauge gauge_;
};

double gauge_eval(const Gauge& g, const Vec& xi);
double weight_eval(const Weight& w, const Vec& xi);
/// w_n(xi) on Omega*, w_n(-xi) on -Omega*, 1 at the origin.
double reflected_weight_eval(const Weight& w, const Vec& xi);

/// Same cone, gauge and order, hence the same Hilbert space.
bool same_space(const Weight& a, const Weight& b) noexcept;

}  // namespace tubehs
