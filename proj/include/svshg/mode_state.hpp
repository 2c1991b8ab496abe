#pragma once

// Per-mode Gaussian-state algebra for single-mode squeezed vacuum, plus a
// truncated Fock-space oracle that recomputes the same moments by direct
// summation over photon-number amplitudes.

#include <cmath>
#include <string>
#include <vector>

#include "svshg/errors.hpp"

namespace svshg {

/// Largest squeeze gain accepted anywhere (sinh^2(20) ~ 5.9e16).
inline constexpr double kMaxGain = 20.0;

inline void check_gain(double g) {
  if (!std::isfinite(g) || g < 0.0) {
    throw DomainError("squeeze gain must be finite and >= 0, got " + std::to_string(g));
  }
  if (g > kMaxGain) {
    throw OverflowGuardError("squeeze gain " + std::to_string(g) + " exceeds guard " +
                             std::to_string(kMaxGain));
  }
}

inline void check_transmission(double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw DomainError("transmission must lie in [0, 1], got " + std::to_string(t));
  }
}

struct ModeMoments {
  double n = 0.0;  // mean photon number
  double m = 0.0;  // |<aa>|
};

/// Lossless moments: n = sinh^2 g, m = sinh g cosh g.
inline ModeMoments moments(double g) {
  check_gain(g);
  const double s = std::sinh(g);
  return {s * s, s * std::cosh(g)};
}

/// Squeezed vacuum of gain g after a beamsplitter channel of cumulative
/// intensity transmission eta. Phase of <aa> is not tracked.
class SqueezedModeState {
 public:
  SqueezedModeState() = default;

  explicit SqueezedModeState(double gain, double transmission = 1.0)
      : gain_(gain), transmission_(transmission) {
    check_gain(gain);
    check_transmission(transmission);
  }

  double gain() const { return gain_; }
  double transmission() const { return transmission_; }

  double mean_photons() const {
    const double s = std::sinh(gain_);
    return transmission_ * (s * s);
  }

  double anomalous() const { return transmission_ * (std::sinh(gain_) * std::cosh(gain_)); }

  bool operator==(const SqueezedModeState&) const = default;

 private:
  double gain_ = 0.0;
  double transmission_ = 1.0;
};

inline SqueezedModeState apply_loss(const SqueezedModeState& state, double t) {
  check_transmission(t);
  return SqueezedModeState(state.gain(), state.transmission() * t);
}

struct TwoPhotonMoments {
  double coherent = 0.0;    // m^2, pair recombination
  double incoherent = 0.0;  // 2 n^2, uncorrelated photons
  double total = 0.0;       // <a+a+aa> = 2 n^2 + m^2
};

inline TwoPhotonMoments two_photon_moments(const SqueezedModeState& state) {
  const double n = state.mean_photons();
  const double m = state.anomalous();
  TwoPhotonMoments out;
  out.coherent = m * m;
  out.incoherent = 2.0 * n * n;
  out.total = out.incoherent + out.coherent;
  return out;
}

struct FockOracleResult {
  std::vector<double> probabilities;  // P(k) for k = 0..cutoff, odd entries zero
  double mean_photons = 0.0;
  double anomalous_sq = 0.0;  // |<aa>|^2
  double pair_moment = 0.0;   // <a+a+aa>
  double tail_mass = 0.0;     // probability beyond the cutoff
};

namespace detail {

// Probability mass above photon number `cutoff`, obtained by continuing the
// amplitude recurrence until the terms are negligible.
inline double fock_tail(double c_last, double tanh_g, int cutoff) {
  double c = c_last;
  double tail = 0.0;
  for (int k = cutoff / 2;; ++k) {
    c *= tanh_g * std::sqrt((2.0 * k + 1.0) / (2.0 * k + 2.0));
    const double p = c * c;
    tail += p;
    if (p < 1e-40 || (p < 1e-20 * tail)) break;
    if (k > 1000000) break;
  }
  return tail;
}

}  // namespace detail

inline constexpr double kFockTailTolerance = 1e-8;

/// Photon-number-space evaluation of single-mode squeezed vacuum.
///
/// Amplitudes c_{2k} = sqrt((2k)!) / (2^k k!) tanh^k(g) / sqrt(cosh g) are
/// built by recurrence, truncated at photon number `cutoff`, and normalised.
/// Throws TruncationError when more than 1e-8 of the mass lies above the
/// cutoff; the error carries the smallest even cutoff that would suffice.
inline FockOracleResult fock_oracle(double g, int cutoff) {
  if (!std::isfinite(g) || g < 0.0 || g > 1.5) {
    throw DomainError("fock_oracle requires 0 <= g <= 1.5, got " + std::to_string(g));
  }
  if (cutoff < 20 || cutoff % 2 != 0) {
    throw DomainError("fock_oracle cutoff must be even and >= 20, got " + std::to_string(cutoff));
  }

  const double th = std::tanh(g);
  std::vector<double> amp(static_cast<std::size_t>(cutoff) + 1, 0.0);
  amp[0] = 1.0 / std::sqrt(std::cosh(g));
  for (int k = 0; 2 * k + 2 <= cutoff; ++k) {
    amp[2 * k + 2] = amp[2 * k] * th * std::sqrt((2.0 * k + 1.0) / (2.0 * k + 2.0));
  }

  FockOracleResult out;
  out.tail_mass = detail::fock_tail(amp[static_cast<std::size_t>(cutoff)], th, cutoff);
  if (out.tail_mass > kFockTailTolerance) {
    int required = cutoff;
    double c = amp[static_cast<std::size_t>(cutoff)];
    double tail = out.tail_mass;
    while (tail > kFockTailTolerance) {
      const int k = required / 2;
      c *= th * std::sqrt((2.0 * k + 1.0) / (2.0 * k + 2.0));
      tail -= c * c;
      required += 2;
    }
    throw TruncationError("fock_oracle: tail mass " + std::to_string(out.tail_mass) +
                              " above cutoff " + std::to_string(cutoff) + "; need cutoff >= " +
                              std::to_string(required),
                          required);
  }

  double norm = 0.0;
  for (double a : amp) norm += a * a;

  out.probabilities.resize(amp.size());
  double aa = 0.0;
  for (std::size_t k = 0; k < amp.size(); ++k) {
    const double p = amp[k] * amp[k] / norm;
    out.probabilities[k] = p;
    const double kd = static_cast<double>(k);
    out.mean_photons += kd * p;
    out.pair_moment += kd * (kd - 1.0) * p;
    if (k + 2 < amp.size()) {
      aa += amp[k] * amp[k + 2] * std::sqrt((kd + 2.0) * (kd + 1.0)) / norm;
    }
  }
  out.anomalous_sq = aa * aa;
  return out;
}

}  // namespace svshg
