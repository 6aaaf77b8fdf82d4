#include "tubehs/decomposition.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "tubehs/error.hpp"

namespace tubehs {

namespace {

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void dft(std::vector<Complex>& data, int dim, int n, int sign) {
  std::vector<int> dims(static_cast<std::size_t>(dim), n);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft(dim, dims.data(), buf, buf, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(plan);
}

int wrap(int k, int n) { return k < 0 ? k + n : k; }

std::size_t flat_index(const std::vector<int>& k, int n) {
  std::size_t idx = 0;
  for (int v : k) idx = idx * static_cast<std::size_t>(n) + static_cast<std::size_t>(wrap(v, n));
  return idx;
}

bool is_zero(const std::vector<int>& k) {
  for (int v : k) {
    if (v != 0) return false;
  }
  return true;
}

double sum_sq(const std::vector<Bin>& bins) {
  double s = 0.0;
  for (const Bin& b : bins) s += std::norm(b.coeff);
  return s;
}

}  // namespace

void validate_grid(const BoundaryGrid& g) {
  if (g.dim != 1 && g.dim != 2) throw Error(ErrorCode::UnsupportedDimension, "grids support d = 1 or 2");
  const int n = g.points_per_axis;
  if (n < 4 || (n & (n - 1)) != 0) {
    throw Error(ErrorCode::InvalidArgument, "points per axis must be a power of two >= 4");
  }
  if (!(g.period > 0.0) || !std::isfinite(g.period)) throw Error(ErrorCode::InvalidArgument, "period must be positive");
  const std::size_t expected = g.dim == 1 ? static_cast<std::size_t>(n) : static_cast<std::size_t>(n) * n;
  if (g.samples.size() != expected) {
    throw Error(ErrorCode::InvalidArgument,
                "expected " + std::to_string(expected) + " samples, got " + std::to_string(g.samples.size()));
  }
}

double Spectrum::energy() const noexcept { return sum_sq(bins); }

Spectrum analyze_grid(const BoundaryGrid& g) {
  validate_grid(g);
  for (const Complex& u : g.samples) {
    if (!std::isfinite(u.real()) || !std::isfinite(u.imag())) {
      throw Error(ErrorCode::NonFiniteSamples, "grid contains non-finite samples");
    }
  }
  const int n = g.points_per_axis;
  std::vector<Complex> data = g.samples;
  dft(data, g.dim, n, FFTW_FORWARD);
  const double norm = 1.0 / static_cast<double>(data.size());
  const double step = 2.0 * std::numbers::pi / g.period;

  Spectrum s{g.dim, n, g.period, {}};
  s.bins.reserve(data.size());
  std::vector<int> k(static_cast<std::size_t>(g.dim), -n / 2);
  for (std::size_t count = 0; count < data.size(); ++count) {
    Bin b;
    b.k = k;
    b.xi = Vec(g.dim);
    for (int i = 0; i < g.dim; ++i) b.xi[i] = step * k[static_cast<std::size_t>(i)];
    b.coeff = data[flat_index(k, n)] * norm;
    s.bins.push_back(std::move(b));
    for (int i = g.dim - 1; i >= 0; --i) {
      auto& ki = k[static_cast<std::size_t>(i)];
      if (++ki < n / 2) break;
      ki = -n / 2;
    }
  }
  return s;
}

SpectrumSplit split_spectrum(const Spectrum& s, const Cone& cone, double tol) {
  if (cone.dim() != s.dim) throw Error(ErrorCode::DimensionMismatch, "cone and grid dimensions differ");
  if (!(tol >= 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be nonnegative");
  SpectrumSplit out;
  out.cone = cone;
  out.points_per_axis = s.points_per_axis;
  out.period = s.period;
  for (const Bin& b : s.bins) {
    if (is_zero(b.k) || contains_dual(cone, b.xi)) {
      out.plus.push_back(b);
    } else if (contains_dual(cone, Vec(-b.xi))) {
      out.minus.push_back(b);
    } else {
      out.residual.push_back(b);
    }
  }
  out.residual_mass = sum_sq(out.residual);
  out.total_energy = s.energy();
  // FFT roundoff leaves O(eps^2 * E) in bins that are exactly empty.
  const double floor = 1e-24 * static_cast<double>(s.bins.size()) * out.total_energy;
  if (out.residual_mass > tol * out.total_energy + floor) {
    throw Error(ErrorCode::SpectrumOutsideCones, "residual mass " + std::to_string(out.residual_mass)  +
                                                     " exceeds tol * energy " +
                                                     std::to_string(tol * out.total_energy));
  }
  return out;
}

Complex Extension::plus(const Vec& x, const Vec& y) const {
  const Cone& cone = split_.cone;
  if (x.size() != cone.dim() || y.size() != cone.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "point dimension does not match cone");
  }
  if (!(interior_depth(cone, y) > 0.0)) throw Error(ErrorCode::WrongTube, "F_+ lives on T_Omega");
  Complex acc = 0.0;
  for (const Bin& b : split_.plus) acc += b.coeff * std::exp(Complex(-y.dot(b.xi), x.dot(b.xi)));
  return acc;
}

Complex Extension::minus(const Vec& x, const Vec& y) const {
  const Cone& cone = split_.cone;
  if (x.size() != cone.dim() || y.size() != cone.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "point dimension does not match cone");
  }
  if (!(interior_depth(cone, Vec(-y)) > 0.0)) throw Error(ErrorCode::WrongTube, "F_- lives on T_{-Omega}");
  Complex acc = 0.0;
  for (const Bin& b : split_.minus) acc += b.coeff * std::exp(Complex(-y.dot(b.xi), x.dot(b.xi)));
  return acc;
}

Extension extend(const SpectrumSplit& split) { return Extension(split); }

std::vector<Complex> synthesize(const std::vector<Bin>& bins, int dim, int points_per_axis) {
  const int n = points_per_axis;
  std::vector<Complex> data(dim == 1 ? static_cast<std::size_t>(n) : static_cast<std::size_t>(n) * n, 0.0);
  for (const Bin& b : bins) data[flat_index(b.k, n)] += b.coeff;
  dft(data, dim, n, FFTW_BACKWARD);
  return data;
}

NormReport norm_identity_report(const BoundaryGrid& g, const Cone& cone, const Weight& weight, double tol) {
  if (weight.cone().dim() != cone.dim()) throw Error(ErrorCode::DimensionMismatch, "weight and cone differ");
  const Spectrum s = analyze_grid(g);
  const SpectrumSplit split = split_spectrum(s, cone, tol);
  NormReport r;
  for (const Bin& b : s.bins) {
    if (b.coeff == Complex(0.0)) continue;
    if (!is_zero(b.k) && !contains_dual(cone, b.xi) && !contains_dual(cone, Vec(-b.xi))) continue;
    r.boundary_norm_sq += std::norm(b.coeff) * reflected_weight_eval(weight, b.xi);
  }
  for (const Bin& b : split.plus) r.plus_norm_sq += std::norm(b.coeff) * weight.value({b.xi.data(), static_cast<std::size_t>(b.xi.size())});
  for (const Bin& b : split.minus) {
    const Vec neg = -b.xi;
    r.minus_norm_sq += std::norm(b.coeff) * weight.value({neg.data(), static_cast<std::size_t>(neg.size())});
  }
  r.defect = std::abs(r.boundary_norm_sq - r.plus_norm_sq - r.minus_norm_sq);
  r.residual_mass = split.residual_mass;
  return r;
}

double boundary_limit_error(const SpectrumSplit& split, const Vec& y) {
  if (y.size() != split.cone.dim()) throw Error(ErrorCode::DimensionMismatch, "y length does not match cone");
  require_interior(split.cone, y, "y");
  double acc = 0.0;
  for (const Bin& b : split.plus) acc += std::norm(std::expm1(-y.dot(b.xi))) * std::norm(b.coeff);
  return acc;
}

}  // namespace tubehs
