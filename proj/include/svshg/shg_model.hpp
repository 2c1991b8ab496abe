#pragma once

// Second-harmonic yield for a classical coherent pulse and for squeezed
// vacuum. Both paths share one flux-squared coupling sigma: the photon
// conversion efficiency at a point is kappa * I, so the SH photon number is
// 1/2 sigma \int Phi^2 with Phi the photon flux density and sigma = kappa hbar w.

#include <cmath>
#include <string>

#include "svshg/constants.hpp"
#include "svshg/errors.hpp"
#include "svshg/measurement.hpp"
#include "svshg/mode_state.hpp"
#include "svshg/pdc_model.hpp"
#include "svshg/quadrature.hpp"

namespace svshg {

/// Overlap factor on the coherent quadratic term, from calibrating the
/// coherent-only enhancement to cross unity at 9.3 photons per mode.
inline constexpr double kCalibratedBeta = 1.197816;

/// Peak photon conversion efficiency above which the undepleted model is refused.
inline constexpr double kUndepletedLimit = 1e-3;

struct ClassicalPulse {
  double wavelength = 1030e-9;  // m
  double photons_per_pulse = 0.0;
  double beam_fwhm = 1.5e-3;       // m
  double duration_fwhm = 185e-15;  // s

  void validate() const {
    if (!(wavelength > 0.0) || !(beam_fwhm > 0.0) || !(duration_fwhm > 0.0)) {
      throw DomainError("classical pulse: wavelength and FWHMs must be positive");
    }
    if (!(photons_per_pulse >= 0.0)) throw DomainError("classical pulse: photons must be >= 0");
  }
};

struct ShgCoupling {
  CrystalParams crystal;
  double beta = kCalibratedBeta;
  double nonlinearity_scale = 0.92;
  double path_efficiency = 0.90;

  void validate() const {
    crystal.validate();
    if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be positive");
    if (!(nonlinearity_scale > 0.0)) throw DomainError("nonlinearity_scale must be positive");
    if (!(path_efficiency > 0.0 && path_efficiency <= 1.0)) {
      throw DomainError("path_efficiency must lie in (0, 1]");
    }
  }

  /// Combined correction applied to both classical and SV yields.
  double overall_correction() const {
    return nonlinearity_scale * nonlinearity_scale * path_efficiency;
  }

  bool operator==(const ShgCoupling&) const = default;
};

struct ShgResult {
  double coh_linear = 0.0;
  double coh_quadratic = 0.0;
  double incoherent_total = 0.0;
  double incoherent_in_aperture = 0.0;
  double total_detectable_coherent = 0.0;  // coherent + aperture leakage of incoherent

  double coherent() const { return coh_linear + coh_quadratic; }
  double total() const { return coh_linear + coh_quadratic + incoherent_total; }
};

/// kappa: photon conversion efficiency per unit intensity (m^2/W),
/// 2 d^2 w^2 l^2 / (n_SV^2 n_P eps0 c^3) with d the scaled nonlinearity.
inline double conversion_per_intensity(const ShgCoupling& coupling) {
  const CrystalParams& x = coupling.crystal;
  const double d = coupling.nonlinearity_scale * x.d_eff;
  const double w = angular_frequency(x.lambda_sv);
  const double c = constants::speed_of_light;
  return 2.0 * d * d * w * w * x.length * x.length /
         (x.n_sv * x.n_sv * x.n_pump * constants::epsilon0 * c * c * c);
}

/// sigma = kappa hbar w: couples photon flux density squared to SH photons.
inline double flux_coupling(const ShgCoupling& coupling) {
  return conversion_per_intensity(coupling) * photon_energy(coupling.crystal.lambda_sv);
}

/// Coherent-state SHG on an arbitrary intensity profile (flux proportional
/// to f^2), before the depletion guard.
template <AmplitudeProfile Profile>
double classical_yield_on(const Profile& profile, double photons, const ShgCoupling& coupling) {
  const double v = profile.volume();
  return coupling.path_efficiency * 0.5 * flux_coupling(coupling) * photons * photons *
         profile.quartic_integral() / (v * v);
}

inline ShgResult classical_shg(const ClassicalPulse& pulse, const ShgCoupling& coupling) {
  pulse.validate();
  coupling.validate();
  if (std::abs(pulse.wavelength - coupling.crystal.lambda_sv) > 1e-6 * pulse.wavelength) {
    throw DomainError("classical pulse wavelength does not match the SHG crystal fundamental");
  }
  const GaussianProfile profile(pulse.beam_fwhm, pulse.duration_fwhm);
  const double peak_intensity =
      pulse.photons_per_pulse * photon_energy(pulse.wavelength) / profile.volume();
  const double peak_conversion = conversion_per_intensity(coupling) * peak_intensity;
  if (peak_conversion > kUndepletedLimit) {
    throw RangeError("classical_shg: peak conversion " + std::to_string(peak_conversion) +
                     " outside the undepleted regime");
  }
  ShgResult out;
  out.coh_quadratic = classical_yield_on(profile, pulse.photons_per_pulse, coupling);
  out.total_detectable_coherent = out.coh_quadratic;
  return out;
}

/// SV-driven SHG over a field at peak gain g0 with loss t before the SHG
/// crystal. Local moments n = t sinh^2(g f), m = t sinh(g f) cosh(g f); the
/// coherent flux equivalent D m gives m^2 = t^2 (sinh^2 + sinh^4): the
/// sinh^2 part is the linear (pair) term, beta x the sinh^4 part the
/// quadratic one. The incoherent part uses 2 n^2.
template <AmplitudeProfile Profile>
ShgResult eshg_on_field(const SvField<Profile>& field, const GainIntegrals& in, double t,
                        const ShgCoupling& coupling, double incoherent_aperture_fraction) {
  check_transmission(t);
  const double d = field.mode_density();
  const double scale = coupling.path_efficiency * 0.5 * flux_coupling(coupling) * d * d * t * t;
  ShgResult out;
  out.coh_linear = scale * in.sinh2;
  out.coh_quadratic = scale * coupling.beta * in.sinh4;
  out.incoherent_total = scale * 2.0 * in.sinh4;
  out.incoherent_in_aperture = out.incoherent_total * incoherent_aperture_fraction;
  out.total_detectable_coherent = out.coherent() + out.incoherent_in_aperture;
  return out;
}

inline ShgResult eshg_from_sv(const CrystalParams& crystal, const PumpPulse& pump,
                              const SpectralWindow& window, double pump_photons, double loss_t,
                              const ShgCoupling& coupling,
                              double incoherent_aperture_fraction =
                                  aperture_fraction(DetectionChain{}),
                              const GridOptions& grid = {}) {
  coupling.validate();
  check_transmission(loss_t);
  const double g0 = peak_gain(coupling_lambda(crystal, pump), pump_photons);
  const auto field = make_sv_field(pump, window);
  return eshg_on_field(field, field.integrals(g0, grid), loss_t, coupling,
                       incoherent_aperture_fraction);
}

enum class EnhancementMode { CoherentOnly, Total };

inline double enhancement_ratio(const ShgResult& sv, const ShgResult& classical,
                                EnhancementMode mode) {
  const double denominator = classical.total();
  if (!(denominator > 0.0)) throw DomainError("enhancement_ratio: classical yield is zero");
  const double numerator = mode == EnhancementMode::CoherentOnly ? sv.coherent() : sv.total();
  return numerator / denominator;
}

/// Coherent pulse with the SV's photon number, beam size, and duration.
inline ClassicalPulse matched_classical(const SvFieldSummary& summary,
                                        double wavelength = 1030e-9) {
  ClassicalPulse pulse;
  pulse.wavelength = wavelength;
  pulse.photons_per_pulse = summary.n_sv_per_pulse;
  pulse.beam_fwhm = summary.beam_fwhm;
  pulse.duration_fwhm = summary.duration_fwhm;
  return pulse;
}

}  // namespace svshg
