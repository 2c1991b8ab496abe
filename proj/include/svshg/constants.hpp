#pragma once

#include <cmath>
#include <numbers>

// CODATA 2018 values, SI units.
namespace svshg::constants {

inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double speed_of_light = 299792458.0;  // m/s
inline constexpr double epsilon0 = 8.8541878128e-12;   // F/m
inline constexpr double pi = std::numbers::pi;
inline constexpr double ln2 = std::numbers::ln2;

}  // namespace svshg::constants

namespace svshg {

inline double angular_frequency(double wavelength) {
  return 2.0 * constants::pi * constants::speed_of_light / wavelength;
}

inline double photon_energy(double wavelength) {
  return constants::hbar * angular_frequency(wavelength);
}

inline double photons_from_energy(double energy, double wavelength) {
  return energy / photon_energy(wavelength);
}

inline double energy_from_photons(double photons, double wavelength) {
  return photons * photon_energy(wavelength);
}

/// (pi / (4 ln 2))^{3/2}: integral of a 3-D Gaussian intensity profile with
/// unit peak and unit FWHM along every axis.
inline double gaussian_volume_factor() {
  return std::pow(constants::pi / (4.0 * constants::ln2), 1.5);
}

}  // namespace svshg
