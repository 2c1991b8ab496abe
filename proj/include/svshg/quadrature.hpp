#pragma once

// Spatiotemporal amplitude profiles and integration of functions of the local
// amplitude over (x, y, t). The squeezed-vacuum model only ever needs
// integrals of the form  I = \int h(f(x, y, t)) dx dy dt  where f is the pump
// amplitude normalised to unit peak, so profiles integrate callables of f.

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <concepts>
#include <cstddef>
#include <string>
#include <vector>

#include "svshg/constants.hpp"
#include "svshg/errors.hpp"

namespace svshg {

struct GridOptions {
  int points = 129;           // per axis, odd
  double extent_fwhm = 3.0;   // half-width of the grid in intensity FWHMs
  bool verify = true;         // re-integrate on the doubled grid and compare
  double tolerance = 1e-3;    // max relative change accepted on refinement

  bool operator==(const GridOptions&) const = default;
};

enum class Axis { Transverse, Temporal };

template <std::size_t N>
using Integrals = std::array<double, N>;

template <class P>
concept AmplitudeProfile = requires(const P& p, double v) {
  { p.beam_fwhm() } -> std::convertible_to<double>;
  { p.duration_fwhm() } -> std::convertible_to<double>;
  { p.volume() } -> std::convertible_to<double>;         // \int f^2
  { p.quartic_integral() } -> std::convertible_to<double>;  // \int f^4
  { p.axis_amplitude(Axis::Transverse, v) } -> std::convertible_to<double>;
};

namespace detail {

template <std::size_t N>
double max_relative_change(const Integrals<N>& coarse, const Integrals<N>& fine) {
  double worst = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double scale = std::max(std::abs(coarse[i]), std::abs(fine[i]));
    if (scale == 0.0) continue;
    worst = std::max(worst, std::abs(fine[i] - coarse[i]) / scale);
  }
  return worst;
}


// Trapezoid weights of the full (2 half + 1)^3 unit-step grid, summed per
// shell i^2 + j^2 + k^2. Cached per grid size.
inline const std::vector<double>& shell_weights(int half) {
  static std::mutex mutex;
  static std::map<int, std::vector<double>> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(half); it != cache.end()) return it->second;
  std::vector<double> w(static_cast<std::size_t>(half) + 1, 2.0);  // mirror image for k > 0
  w[0] = 1.0;
  w.back() *= 0.5;
  std::vector<double> shells(3 * static_cast<std::size_t>(half) * half + 1, 0.0);
  for (int i = 0; i <= half; ++i) {
    for (int j = i; j <= half; ++j) {
      const double wij = w[i] * w[j] * (i == j ? 1.0 : 2.0);
      const int r = i * i + j * j;
      for (int k = 0; k <= half; ++k) shells[r + k * k] += wij * w[k];
    }
  }
  return cache.emplace(half, std::move(shells)).first->second;
}

}  // namespace detail

/// Separable Gaussian amplitude f = exp(-2 ln2 (x^2 + y^2)/W^2 - 2 ln2 t^2/T^2),
/// so that f^2 has intensity FWHM W transversely and T in time.
class GaussianProfile {
 public:
  GaussianProfile(double beam_fwhm, double duration_fwhm)
      : beam_(beam_fwhm), duration_(duration_fwhm) {
    if (!(beam_fwhm > 0.0) || !(duration_fwhm > 0.0)) {
      throw DomainError("Gaussian profile FWHMs must be positive");
    }
  }

  double beam_fwhm() const { return beam_; }
  double duration_fwhm() const { return duration_; }

  double volume() const { return gaussian_volume_factor() * beam_ * beam_ * duration_; }

  // Intensity squared integrates to V / 2^{3/2} for a Gaussian.
  double quartic_integral() const { return volume() / std::pow(2.0, 1.5); }

  double axis_amplitude(Axis axis, double coordinate) const {
    const double width = axis == Axis::Transverse ? beam_ : duration_;
    const double u = coordinate / width;
    return std::exp(-2.0 * constants::ln2 * u * u);
  }

  /// Trapezoidal product grid over +-extent FWHM per axis. With the same
  /// number of steps per FWHM on every axis the amplitude at node (i, j, k)
  /// is exp(-alpha (i^2 + j^2 + k^2)), so the rule is summed per shell
  /// s = i^2 + j^2 + k^2 with precomputed weights.
  template <std::size_t N, class Fn>
  Integrals<N> integrate_on_grid(Fn&& fn, int points, double extent_fwhm) const {
    if (points < 5 || points % 2 == 0) {
      throw DomainError("grid points per axis must be odd and >= 5");
    }
    const int half = (points - 1) / 2;
    const double step = extent_fwhm / half;  // in FWHM units
    const double alpha = 2.0 * constants::ln2 * step * step;
    const double cell = (step * beam_) * (step * beam_) * (step * duration_);
    const std::vector<double>& shells = detail::shell_weights(half);

    Integrals<N> total{};
    for (std::size_t s = 0; s < shells.size(); ++s) {
      if (shells[s] == 0.0) continue;
      const Integrals<N> v = fn(std::exp(-alpha * static_cast<double>(s)));
      for (std::size_t c = 0; c < N; ++c) total[c] += shells[s] * v[c];
    }
    for (double& c : total) c *= cell;
    return total;
  }

 private:
  double beam_;
  double duration_;
};

/// Uniform amplitude inside a box of width W x W x T, zero outside. Used to
/// check per-mode identities where every mode sees the same gain.
class FlatTopProfile {
 public:
  FlatTopProfile(double beam_fwhm, double duration_fwhm)
      : beam_(beam_fwhm), duration_(duration_fwhm) {
    if (!(beam_fwhm > 0.0) || !(duration_fwhm > 0.0)) {
      throw DomainError("flat-top profile widths must be positive");
    }
  }

  double beam_fwhm() const { return beam_; }
  double duration_fwhm() const { return duration_; }
  double volume() const { return beam_ * beam_ * duration_; }
  double quartic_integral() const { return volume(); }

  double axis_amplitude(Axis axis, double coordinate) const {
    const double width = axis == Axis::Transverse ? beam_ : duration_;
    return std::abs(coordinate) <= 0.5 * width ? 1.0 : 0.0;
  }

  // Exact: the integrand is fn(1) on the box and fn(0) = 0 outside.
  template <std::size_t N, class Fn>
  Integrals<N> integrate_on_grid(Fn&& fn, int /*points*/, double /*extent*/) const {
    Integrals<N> v = fn(1.0);
    for (double& c : v) c *= volume();
    return v;
  }

 private:
  double beam_;
  double duration_;
};

/// Integrates fn(f) over the profile. With `verify`, the grid is refined by
/// doubling every dimension and the refined value is returned if it moved by
/// less than the tolerance; otherwise ConvergenceError.
template <std::size_t N, AmplitudeProfile Profile, class Fn>
Integrals<N> integrate_profile(const Profile& profile, Fn&& fn, const GridOptions& grid = {}) {
  const Integrals<N> coarse =
      profile.template integrate_on_grid<N>(fn, grid.points, grid.extent_fwhm);
  if (!grid.verify) return coarse;
  const Integrals<N> fine =
      profile.template integrate_on_grid<N>(fn, 2 * grid.points - 1, grid.extent_fwhm);
  const double change = detail::max_relative_change(coarse, fine);
  if (change > grid.tolerance) {
    throw ConvergenceError("quadrature changed by " + std::to_string(change) +
                           " on refinement (points " + std::to_string(grid.points) + ")");
  }
  return fine;
}

/// Full width at half maximum of h(f(coordinate)) along one axis through the
/// peak. h must be increasing in f with h(0) = 0; if h(1) == 0 the profile's
/// own intensity FWHM is returned (vanishing-gain limit).
template <AmplitudeProfile Profile, class Fn>
double slice_fwhm(const Profile& profile, Axis axis, Fn&& h) {
  const double width = axis == Axis::Transverse ? profile.beam_fwhm() : profile.duration_fwhm();
  const double peak = h(1.0);
  if (!(peak > 0.0)) return width;
  const double half = 0.5 * peak;
  double lo = 0.0;
  double hi = 0.5 * width;
  while (h(profile.axis_amplitude(axis, hi)) > half) {
    hi *= 2.0;
    if (hi > 1e3 * width) throw ConvergenceError("slice_fwhm: no half-maximum crossing");
  }
  for (int iter = 0; iter < 200 && (hi - lo) > 1e-15 * width; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (h(profile.axis_amplitude(axis, mid)) > half) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo + hi;  // 2 * midpoint
}

}  // namespace svshg
