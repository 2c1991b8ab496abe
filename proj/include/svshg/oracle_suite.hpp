#pragma once

// Release-gate checks of the single-mode moments against independent
// evaluations: Fock-space sums, the flat-top SHG identity, loss scaling and
// small-gain limits. The moment function is injectable so that a corrupted
// implementation can be shown to fail.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "svshg/errors.hpp"
#include "svshg/mode_state.hpp"
#include "svshg/pdc_model.hpp"
#include "svshg/quadrature.hpp"
#include "svshg/shg_model.hpp"

namespace svshg {

struct OracleCheck {
  std::string name;
  bool passed = false;
  double error = 0.0;
  double tolerance = 0.0;
};

struct OracleReport {
  std::vector<OracleCheck> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  }
};

using MomentFunction = std::function<ModeMoments(double)>;

namespace detail {

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

inline void record(OracleReport& r, std::string name, double error, double tolerance) {
  r.checks.push_back({std::move(name), std::isfinite(error) && error <= tolerance, error,
                      tolerance});
}

/// Fock sums at g with the cutoff doubled until the moments stop moving. A
/// cutoff that only bounds the tail mass is not enough: the moments weight
/// the tail by k^2.
inline FockOracleResult fock_converged(double g) {
  int cutoff = 60;
  FockOracleResult prev;
  try {
    prev = fock_oracle(g, cutoff);
  } catch (const TruncationError& e) {
    cutoff = e.required_cutoff();
    prev = fock_oracle(g, cutoff);
  }
  while (cutoff < 8192) {
    cutoff *= 2;
    FockOracleResult next = fock_oracle(g, cutoff);
    const bool settled = rel_err(prev.mean_photons, next.mean_photons) < 1e-14 &&
                         rel_err(prev.anomalous_sq, next.anomalous_sq) < 1e-14 &&
                         rel_err(prev.pair_moment, next.pair_moment) < 1e-14;
    prev = std::move(next);
    if (settled) break;
  }
  return prev;
}

inline double fock_moment_error(const MomentFunction& mom, double g, const FockOracleResult& f) {
  const ModeMoments m = mom(g);
  const double n = m.n;
  return std::max({std::abs(f.mean_photons - n) / std::max(1.0, n),
                   std::abs(f.anomalous_sq - m.m * m.m) / std::max(1.0, m.m * m.m),
                   std::abs(f.pair_moment - (2 * n * n + m.m * m.m)) /
                       std::max(1.0, 2 * n * n + m.m * m.m)});
}

}  // namespace detail

inline OracleReport run_oracle(const MomentFunction& mom = moments) {
  OracleReport report;

  double purity = 0.0;
  for (double g = 0.05; g <= 5.0 + 1e-12; g += 0.05) {
    const ModeMoments m = mom(g);
    purity = std::max(purity, detail::rel_err(m.m * m.m, m.n * (m.n + 1.0)));
  }
  detail::record(report, "purity m^2 = n(n+1), g in [0.05, 5]", purity, 1e-12);

  detail::record(report, "fock moments g=0.5 cutoff 60",
                 detail::fock_moment_error(mom, 0.5, fock_oracle(0.5, 60)), 1e-8);

  double fock_high = 0.0;
  for (double g : {0.8, 1.0, 1.2, 1.5}) {
    fock_high = std::max(fock_high, detail::fock_moment_error(mom, g, detail::fock_converged(g)));
  }
  detail::record(report, "fock moments g<=1.5 adaptive cutoff", fock_high, 1e-8);

  // Flat-top profile, beta = 1: SV coherent SHG / classical SHG = 1 + 1/n.
  double flat = 0.0;
  {
    const FlatTopProfile profile(1.5e-3, 185e-15);
    const SvField<FlatTopProfile> field(profile, 19000.0);
    ShgCoupling coupling;
    coupling.beta = 1.0;
    for (double g : {0.1, 0.5, 1.0, 2.0, 3.0}) {
      const ModeMoments m = mom(g);
      const GainIntegrals in = field.integrals(g);
      const ShgResult sv = eshg_on_field(field, in, 1.0, coupling, 0.0);
      const double classical =
          classical_yield_on(profile, field.mode_density() * in.sinh2, coupling);
      flat = std::max(flat, detail::rel_err(sv.coherent() / classical, 1.0 + 1.0 / m.n));
    }
  }
  detail::record(report, "flat-top enhancement = 1 + 1/n", flat, 1e-9);

  double loss = 0.0;
  for (double g : {0.3, 1.0, 2.5}) {
    for (double t : {0.1, 0.5, 0.7}) {
      const SqueezedModeState s(g);
      const SqueezedModeState l = apply_loss(s, t);
      const ModeMoments m = mom(g);
      loss = std::max({loss, detail::rel_err(l.mean_photons(), t * m.n),
                       detail::rel_err(two_photon_moments(l).coherent, t * t * m.m * m.m),
                       detail::rel_err(two_photon_moments(l).incoherent, 2 * t * t * m.n * m.n)});
    }
  }
  detail::record(report, "loss scaling n -> t n, pair moments -> t^2", loss, 1e-12);

  double small = 0.0;
  {
    const double g = 1e-4;
    const ModeMoments m = mom(g);
    small = std::max(detail::rel_err(m.n, g * g), detail::rel_err(m.m, g));
  }
  detail::record(report, "small gain n ~ g^2, m ~ g", small, 1e-7);
  return report;
}

}  // namespace svshg
