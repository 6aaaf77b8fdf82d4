#pragma once

#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "tubehs/cone.hpp"

namespace tubehs {

using Complex = std::complex<double>;
using Integrand = std::function<Complex(std::span<const double>)>;

inline constexpr double kDefaultTarget = 1e-8;

/// What a rule has to resolve.
///
/// `decay_scale` is the guaranteed exponential rate of the integrand in the
/// radial chart coordinates of Omega* (see radial_coordinates); for
/// e^{-<y, xi>} this is at least interior_depth(y). `degree` bounds the
/// polynomial growth. `frequency` bounds |zeta| for integrands that behave
/// like e^{i<zeta, xi>} with complex zeta.
struct RuleRequest {
  double decay_scale = 1.0;
  int degree = 0;
  double frequency = 0.0;
  double target = kDefaultTarget;
  /// Integrand vanishes once any radial coordinate exceeds this radius.
  std::optional<double> support_radius;
  /// Each level halves every panel.
  int refinement = 0;
};

/// Positive-weight rule on a truncated dual cone.
struct QuadratureRule {
  int dim = 0;
  std::vector<double> nodes;  ///< flattened, dim entries per node
  std::vector<double> weights;
  double decay_scale = 0.0;
  int order_budget = 0;
  double frequency = 0.0;
  double truncation = 0.0;  ///< radial cut-off
  double est_rel_error = 0.0;

  std::size_t size() const noexcept { return weights.size(); }
  std::span<const double> node(std::size_t j) const noexcept {
    return {nodes.data() + j * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
};

QuadratureRule build_rule(const Cone& cone, const RuleRequest& request);
QuadratureRule build_rule(const Cone& cone, double decay_scale, int degree, double target = kDefaultTarget);

/// Sum_j q_j phi(xi_j) with compensated summation in node order.
Complex integrate(const QuadratureRule& rule, const Integrand& phi);

nlohmann::json rule_to_json(const QuadratureRule& rule);
QuadratureRule rule_from_json(const nlohmann::json& j);

struct AdaptiveOptions {
  double tol = 1e-10;
  /// Length scale of the compactifying map xi = L t / (1 - t) is 1 / decay_hint.
  double decay_hint = 1.0;
  std::optional<double> support_radius;
  int max_intervals = 4000;
};

/// Adaptive Gauss-Kronrod reference integral over Omega*, iterated over the
/// radial chart coordinates. Independent of build_rule; meant as an oracle.
Complex adaptive_reference(const Cone& cone, const Integrand& phi, const AdaptiveOptions& options = {});

/// Read-mostly cache of rules keyed by bucketed request parameters. Decay is
/// rounded down and frequency up to a quarter-octave grid, so a cached rule
/// is always at least as conservative as the request.
class RuleCache {
 public:
  explicit RuleCache(Cone cone) : cone_(std::move(cone)) {}

  std::shared_ptr<const QuadratureRule> get(const RuleRequest& request);
  const Cone& cone() const noexcept { return cone_; }
  std::size_t size() const;

 private:
  using Key = std::tuple<int, int, int, long long, long long, int>;

  Cone cone_;
  mutable std::shared_mutex mutex_;
  std::map<Key, std::shared_ptr<const QuadratureRule>> rules_;
};

}  // namespace tubehs
