#pragma once

// Parametric down-conversion source: coupling strength from crystal and pump
// parameters, mode counting, and a quasi-stationary local-gain model in which
// the squeeze gain follows the local pump amplitude g(x, y, t) = g0 f(x, y, t).

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include <boost/math/tools/toms748_solve.hpp>

#include "svshg/constants.hpp"
#include "svshg/errors.hpp"
#include "svshg/mode_state.hpp"
#include "svshg/quadrature.hpp"

namespace svshg {

/// Degenerate collinear type-I crystal. Defaults: 2 mm BBO at 515 nm -> 1030 nm.
struct CrystalParams {
  double length = 2e-3;        // m
  double d_eff = 1.79e-12;     // m/V
  double n_pump = 1.66;
  double n_sv = 1.66;
  double lambda_pump = 515e-9;  // m
  double lambda_sv = 1030e-9;   // m

  void validate() const {
    if (!(length > 0.0) || !(n_pump > 0.0) || !(n_sv > 0.0) || !(lambda_pump > 0.0) ||
        !(lambda_sv > 0.0) || !(d_eff >= 0.0)) {
      throw DomainError("crystal parameters must be positive");
    }
    if (std::abs(lambda_sv - 2.0 * lambda_pump) > 1e-6 * lambda_sv) {
      throw DomainError("crystal: lambda_sv must equal 2 * lambda_pump (degenerate PDC)");
    }
  }

  bool operator==(const CrystalParams&) const = default;
};

struct PumpPulse {
  double pulse_energy = 0.0;       // J
  double beam_fwhm = 1.5e-3;       // m, intensity FWHM
  double duration_fwhm = 185e-15;  // s, intensity FWHM
  double rep_rate = 500e3;         // Hz

  void validate() const {
    if (!(pulse_energy >= 0.0)) throw DomainError("pump energy must be >= 0");
    if (!(beam_fwhm > 0.0) || !(duration_fwhm > 0.0)) {
      throw DomainError("pump FWHMs must be positive");
    }
    if (!(rep_rate > 0.0)) throw DomainError("pump repetition rate must be positive");
  }

  bool operator==(const PumpPulse&) const = default;
};

/// Entanglement volume of the SV. Bandwidths and entanglement sizes are tied
/// by fixed products: duration x temporal bandwidth = 5.625 (45 fs at
/// 125 THz) and size x angular bandwidth = 6.6 (22 um at 300 mm^-1).
struct SpectralWindow {
  static constexpr double kTimeBandwidth = 5.625;
  static constexpr double kSpaceBandwidth = 6.6;

  double temporal_bandwidth = 125e12;  // Hz FWHM
  double angular_bandwidth = 300e3;    // 1/m FWHM
  double ent_duration = kTimeBandwidth / 125e12;
  double ent_size = kSpaceBandwidth / 300e3;

  static SpectralWindow from_bandwidths(double temporal, double angular) {
    SpectralWindow w;
    w.temporal_bandwidth = temporal;
    w.angular_bandwidth = angular;
    w.ent_duration = kTimeBandwidth / temporal;
    w.ent_size = kSpaceBandwidth / angular;
    w.validate();
    return w;
  }

  static SpectralWindow from_entanglement(double duration, double size) {
    SpectralWindow w;
    w.ent_duration = duration;
    w.ent_size = size;
    w.temporal_bandwidth = kTimeBandwidth / duration;
    w.angular_bandwidth = kSpaceBandwidth / size;
    w.validate();
    return w;
  }

  void validate() const {
    if (!(temporal_bandwidth > 0.0) || !(angular_bandwidth > 0.0) || !(ent_duration > 0.0) ||
        !(ent_size > 0.0)) {
      throw DomainError("spectral window entries must be positive");
    }
    if (std::abs(ent_duration * temporal_bandwidth / kTimeBandwidth - 1.0) > 1e-6 ||
        std::abs(ent_size * angular_bandwidth / kSpaceBandwidth - 1.0) > 1e-6) {
      throw DomainError("spectral window: entanglement size/duration inconsistent with bandwidths");
    }
  }

  bool operator==(const SpectralWindow&) const = default;
};

struct SvFieldSummary {
  double n_sv_per_pulse = 0.0;
  double k_m = 0.0;
  double n_per_mode = 0.0;
  double beam_fwhm = 0.0;
  double duration_fwhm = 0.0;
  double peak_gain = 0.0;
};

/// Gaussian-equivalent pump volume V_P = (pi / 4 ln2)^{3/2} W^2 T.
inline double pump_volume(const PumpPulse& pump) {
  return gaussian_volume_factor() * pump.beam_fwhm * pump.beam_fwhm * pump.duration_fwhm;
}

inline double pump_photons(const PumpPulse& pump, const CrystalParams& crystal) {
  return photons_from_energy(pump.pulse_energy, crystal.lambda_pump);
}

/// Lambda = 2 l_c d_eff sqrt(hbar w_P w_SV^2 / (2 eps0 n_P n_SV^2 c^3 V_P)),
/// the gain per square-root pump photon.
inline double coupling_lambda(const CrystalParams& crystal, const PumpPulse& pump) {
  crystal.validate();
  const double volume = pump_volume(pump);
  if (!(volume > 0.0)) throw DomainError("coupling_lambda: zero pump volume");
  const double wp = angular_frequency(crystal.lambda_pump);
  const double ws = angular_frequency(crystal.lambda_sv);
  const double c = constants::speed_of_light;
  const double ratio = constants::hbar * wp * ws * ws /
                       (2.0 * constants::epsilon0 * crystal.n_pump * crystal.n_sv * crystal.n_sv *
                        c * c * c * volume);
  return 2.0 * crystal.length * crystal.d_eff * std::sqrt(ratio);
}

inline double peak_gain(double lambda, double pump_photons) {
  if (!(pump_photons >= 0.0)) throw DomainError("peak_gain: pump photons must be >= 0");
  return lambda * std::sqrt(pump_photons);
}

inline double pump_photons_for_gain(double lambda, double g0) {
  if (!(lambda > 0.0)) throw RangeError("zero coupling: no pump energy reaches a finite gain");
  const double r = g0 / lambda;
  return r * r;
}

/// Low-gain mode count: ratio of the pump volume to the entanglement volume,
/// taken along each FWHM.
inline double mode_number_lowgain(const PumpPulse& pump, const SpectralWindow& window) {
  const double transverse = pump.beam_fwhm / window.ent_size;
  return (pump.duration_fwhm / window.ent_duration) * transverse * transverse;
}

/// Integrals of sinh^2(g0 f) and sinh^4(g0 f) over the profile.
struct GainIntegrals {
  double sinh2 = 0.0;
  double sinh4 = 0.0;
};

/// Squeezed-vacuum field over a pump amplitude profile. The mode density
/// (modes per unit spatiotemporal volume) is fixed so that at vanishing gain
/// the mode count equals `lowgain_modes`.
template <AmplitudeProfile Profile>
class SvField {
 public:
  SvField(Profile profile, double lowgain_modes)
      : profile_(std::move(profile)), mode_density_(lowgain_modes / profile_.volume()) {}

  const Profile& profile() const { return profile_; }
  double mode_density() const { return mode_density_; }

  GainIntegrals integrals(double g0, const GridOptions& grid = {}) const {
    check_gain(g0);
    if (g0 == 0.0) return {};
    const auto v = integrate_profile<2>(
        profile_,
        [g0](double f) {
          const double s = std::sinh(g0 * f);
          const double s2 = s * s;
          return Integrals<2>{s2, s2 * s2};
        },
        grid);
    return {v[0], v[1]};
  }

  double photons(double g0, const GridOptions& grid = {}) const {
    check_gain(g0);
    if (g0 == 0.0) return 0.0;
    const auto v = integrate_profile<1>(
        profile_,
        [g0](double f) {
          const double s = std::sinh(g0 * f);
          return Integrals<1>{s * s};
        },
        grid);
    return mode_density_ * v[0];
  }

  double fwhm(Axis axis, double g0) const {
    check_gain(g0);
    return slice_fwhm(profile_, axis, [g0](double f) {
      const double s = std::sinh(g0 * f);
      return s * s;
    });
  }

  SvFieldSummary summary(double g0, const GridOptions& grid = {}) const {
    return summary_from(g0, integrals(g0, grid));
  }

  SvFieldSummary summary_from(double g0, const GainIntegrals& in) const {
    SvFieldSummary out;
    out.peak_gain = g0;
    out.beam_fwhm = fwhm(Axis::Transverse, g0);
    out.duration_fwhm = fwhm(Axis::Temporal, g0);
    if (g0 == 0.0) {
      out.k_m = mode_density_ * profile_.volume();
      return out;
    }
    const double s = std::sinh(g0);
    out.n_per_mode = s * s;
    out.n_sv_per_pulse = mode_density_ * in.sinh2;
    out.k_m = out.n_sv_per_pulse / out.n_per_mode;
    return out;
  }

  /// Peak gain g0 for which `transmission` x N_SV(g0) equals `target`.
  double gain_for_flux(double target, double transmission, const GridOptions& grid = {}) const {
    if (!(target >= 0.0) || !std::isfinite(target)) {
      throw DomainError("target photon flux must be finite and >= 0");
    }
    if (!(transmission > 0.0 && transmission <= 1.0)) {
      throw DomainError("transmission must lie in (0, 1]");
    }
    if (target == 0.0) return 0.0;
    GridOptions inner = grid;
    inner.verify = false;
    const auto residual = [&](double g) { return transmission * photons(g, inner) - target; };
    const double top = residual(kMaxGain);
    if (top < 0.0) {
      throw RangeError("target flux " + std::to_string(target) +
                       " unreachable below the gain guard");
    }
    // Bracket from the low-gain estimate N ~ K g^2 upward.
    double lo = 0.0;
    double hi = std::min(kMaxGain, std::sqrt(target / (transmission * mode_density_ *
                                                       profile_.volume())));
    while (residual(hi) < 0.0) {
      lo = hi;
      hi = std::min(kMaxGain, 2.0 * hi);
    }
    std::uintmax_t iterations = 200;
    const auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-14 * std::abs(b); };
    const auto [a, b] =
        boost::math::tools::toms748_solve(residual, lo, hi, tol, iterations);
    const double g = 0.5 * (a + b);
    const double achieved = transmission * photons(g, grid);
    if (std::abs(achieved - target) > 1e-9 * target) {
      throw ConvergenceError("flux inversion residual " +
                             std::to_string(std::abs(achieved - target) / target));
    }
    return g;
  }

 private:
  Profile profile_;
  double mode_density_;
};

inline SvField<GaussianProfile> make_sv_field(const PumpPulse& pump, const SpectralWindow& window) {
  pump.validate();
  window.validate();
  return SvField<GaussianProfile>(GaussianProfile(pump.beam_fwhm, pump.duration_fwhm),
                                  mode_number_lowgain(pump, window));
}

inline SvFieldSummary sv_summary(const CrystalParams& crystal, const PumpPulse& pump,
                                 const SpectralWindow& window, double pump_photons,
                                 const GridOptions& grid = {}) {
  const double g0 = peak_gain(coupling_lambda(crystal, pump), pump_photons);
  return make_sv_field(pump, window).summary(g0, grid);
}

/// Pump photons needed so that a fraction t of the generated SV carries
/// `target` photons.
inline double invert_flux(const CrystalParams& crystal, const PumpPulse& pump,
                          const SpectralWindow& window, double target, double t,
                          const GridOptions& grid = {}) {
  const double lambda = coupling_lambda(crystal, pump);
  const double g0 = make_sv_field(pump, window).gain_for_flux(target, t, grid);
  if (g0 == 0.0) return 0.0;
  return pump_photons_for_gain(lambda, g0);
}

}  // namespace svshg
