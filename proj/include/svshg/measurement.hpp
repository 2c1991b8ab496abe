#pragma once

// Detection chain: PMT quantum efficiency, far-field aperture, a single lumped
// background rate, and seeded Poisson photon counting. Everything upstream is
// in photons per pulse; conversion to and from detector counts happens here.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "svshg/errors.hpp"

namespace svshg {

struct DetectionChain {
  double pmt_qe = 0.40;
  double aperture_diameter = 1e-3;             // m
  double incoherent_farfield_diameter = 12e-3;  // m
  double background_rate = 0.0;                // photon-equivalents per pulse
  double rep_rate = 500e3;                     // Hz
  double acquisition_time = 300.0;             // s

  double pulses() const { return std::round(rep_rate * acquisition_time); }

  void validate() const {
    if (!(pmt_qe >= 0.0 && pmt_qe <= 1.0)) throw DomainError("pmt_qe must lie in [0, 1]");
    if (!(aperture_diameter > 0.0) || !(incoherent_farfield_diameter > 0.0)) {
      throw DomainError("aperture diameters must be positive");
    }
    if (aperture_diameter > incoherent_farfield_diameter) {
      throw DomainError("aperture larger than the incoherent far-field spot");
    }
    if (!(background_rate >= 0.0)) throw DomainError("background rate must be >= 0");
    if (!(rep_rate > 0.0) || !(acquisition_time > 0.0)) {
      throw DomainError("repetition rate and acquisition time must be positive");
    }
    if (pulses() < 1.0) throw DomainError("acquisition shorter than one pulse");
  }

  bool operator==(const DetectionChain&) const = default;
};

/// Fraction of the incoherent (broad far-field) SH passed by the aperture.
/// The coherent component is fully transmitted.
inline double aperture_fraction(const DetectionChain& chain) {
  const double r = chain.aperture_diameter / chain.incoherent_farfield_diameter;
  return r * r;
}

struct CountRun {
  std::uint64_t total_counts = 0;
  double pulses = 0.0;
  double pmt_qe = 1.0;

  double counts_per_pulse() const { return static_cast<double>(total_counts) / pulses; }
  double counts_std_error() const {
    return std::sqrt(static_cast<double>(total_counts)) / pulses;
  }
  // In photons per pulse at the detector input.
  double mean_photons() const { return counts_per_pulse() / pmt_qe; }
  double std_error_photons() const { return counts_std_error() / pmt_qe; }
};

/// Poisson counts over a full acquisition with mean qe * (signal + background) * pulses.
/// Same seed, same inputs: identical output.
inline CountRun simulate_counts(double mean_photons_per_pulse, const DetectionChain& chain,
                                std::uint64_t seed) {
  if (!(mean_photons_per_pulse >= 0.0) || !std::isfinite(mean_photons_per_pulse)) {
    throw DomainError("simulate_counts: mean photons must be finite and >= 0");
  }
  chain.validate();
  CountRun run;
  run.pulses = chain.pulses();
  run.pmt_qe = chain.pmt_qe;
  const double mean =
      chain.pmt_qe * (mean_photons_per_pulse + chain.background_rate) * run.pulses;
  if (mean > 0.0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    std::mt19937_64 rng(seq);
    std::poisson_distribution<std::uint64_t> poisson(mean);
    run.total_counts = poisson(rng);
  }
  return run;
}

struct CorrectedSignal {
  double mean = 0.0;  // counts per pulse, may be negative
  double std = 0.0;
};

/// Background-subtracted rate with errors added in quadrature; negative
/// results are reported, not clamped.
inline CorrectedSignal background_subtract(const CountRun& signal, const CountRun& background) {
  if (signal.pulses != background.pulses) {
    throw ShapeError("background_subtract: pulse counts differ (" +
                     std::to_string(signal.pulses) + " vs " + std::to_string(background.pulses) +
                     ")");
  }
  const double s = static_cast<double>(signal.total_counts);
  const double b = static_cast<double>(background.total_counts);
  return {(s - b) / signal.pulses, std::sqrt(s + b) / signal.pulses};
}

/// Independent stream per (seed, index) so row results do not depend on
/// evaluation order. SplitMix64 finaliser.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace svshg
