#include <gtest/gtest.h>

#include <cmath>

#include "svshg/pdc_model.hpp"
#include "svshg/shg_model.hpp"

using namespace svshg;

namespace {

ShgCoupling bare_coupling() {
  ShgCoupling c;
  c.nonlinearity_scale = 1.0;
  c.path_efficiency = 1.0;
  c.crystal.d_eff = 1.65e-12;
  return c;
}

}  // namespace

TEST(ShgCoupling, CorrectionRoundsToQuotedValue) {
  const ShgCoupling c;
  EXPECT_NEAR(c.overall_correction(), 0.76176, 1e-12);
  // Quoted as 0.76; 0.92^2 x 0.90 agrees to the two digits given.
  EXPECT_NEAR(c.overall_correction(), 0.76, 0.005);
}

TEST(ShgCoupling, Validation) {
  ShgCoupling c;
  c.beta = 0.0;
  EXPECT_THROW(c.validate(), DomainError);
  c = ShgCoupling{};
  c.path_efficiency = 1.5;
  EXPECT_THROW(c.validate(), DomainError);
}

TEST(ClassicalShg, ZeroPhotons) {
  ClassicalPulse p;
  p.photons_per_pulse = 0.0;
  const ShgResult r = classical_shg(p, bare_coupling());
  EXPECT_EQ(r.total(), 0.0);
  EXPECT_EQ(r.coh_linear, 0.0);
  EXPECT_EQ(r.incoherent_total, 0.0);
}

TEST(ClassicalShg, TableRowByHand) {
  // 246.9e3 photons, 0.90 mm, 137 fs, d = 1.65 pm/V, no corrections.
  ClassicalPulse p;
  p.photons_per_pulse = 246.9e3;
  p.beam_fwhm = 0.90e-3;
  p.duration_fwhm = 137e-15;
  const double hbar = 1.054571817e-34, c = 299792458.0, eps0 = 8.8541878128e-12;
  const double pi = 3.14159265358979323846, ln2 = 0.69314718055994530942;
  const double w = 2 * pi * c / 1030e-9;
  const double volume = std::pow(pi / (4 * ln2), 1.5) * 0.90e-3 * 0.90e-3 * 137e-15;
  const double intensity = p.photons_per_pulse * hbar * w / volume;
  const double d = 1.65e-12, l = 2e-3, n = 1.66;
  const double eta_peak = 2 * d * d * w * w * l * l * intensity / (n * n * n * eps0 * c * c * c);
  const double expected = 0.5 * eta_peak * p.photons_per_pulse / std::pow(2.0, 1.5);

  EXPECT_NEAR(intensity, 3.5576e5, 0.0001e5);
  EXPECT_NEAR(eta_peak, 2.3747e-8, 0.0001e-8);
  const ShgResult r = classical_shg(p, bare_coupling());
  EXPECT_NEAR(r.coh_quadratic / expected, 1.0, 1e-12);
  EXPECT_NEAR(r.coh_quadratic, 1.0e-3, 0.05e-3);
}

TEST(ClassicalShg, QuadraticHomogeneity) {
  ClassicalPulse p;
  p.photons_per_pulse = 1e5;
  const double base = classical_shg(p, bare_coupling()).total();
  for (double k : {2.0, 3.7, 10.0}) {
    p.photons_per_pulse = 1e5 * k;
    EXPECT_NEAR(classical_shg(p, bare_coupling()).total() / base, k * k, 1e-12 * k * k);
  }
}

TEST(ClassicalShg, DepletionGuardAndWavelength) {
  ClassicalPulse p;
  p.photons_per_pulse = 1e17;
  EXPECT_THROW(classical_shg(p, bare_coupling()), RangeError);
  p.photons_per_pulse = 1e3;
  p.wavelength = 800e-9;
  EXPECT_THROW(classical_shg(p, bare_coupling()), DomainError);
}

TEST(EshgFromSv, ZeroPump) {
  const ShgResult r = eshg_from_sv(CrystalParams{}, PumpPulse{}, SpectralWindow{}, 0.0, 1.0,
                                   ShgCoupling{});
  EXPECT_EQ(r.total(), 0.0);
  EXPECT_EQ(r.total_detectable_coherent, 0.0);
}

TEST(EshgFromSv, LowGainEfficiency) {
  // <n>_m = 0.05 with the default corrections; eta = 2 coh_linear / N_SV.
  ShgCoupling coupling;
  const auto field = make_sv_field(PumpPulse{}, SpectralWindow{});
  const double g0 = std::asinh(std::sqrt(0.05));
  const GainIntegrals in = field.integrals(g0);
  const ShgResult r = eshg_on_field(field, in, 1.0, coupling, aperture_fraction(DetectionChain{}));
  const double eta_post = 2 * r.coh_linear / (field.mode_density() * in.sinh2);
  const double eta_pre = eta_post / coupling.path_efficiency;
  // Independent: sigma D with D = K_m(0) / V_P.
  const double sigma = flux_coupling(coupling);
  const double d = mode_number_lowgain(PumpPulse{}, SpectralWindow{}) / pump_volume(PumpPulse{});
  EXPECT_NEAR(eta_pre / (sigma * d), 1.0, 1e-12);
  EXPECT_NEAR(eta_pre, 4.881e-10, 0.001e-10);
  EXPECT_NEAR(eta_pre, 4.3e-10, 0.15 * 4.3e-10);
}

TEST(EshgFromSv, SplitAndIncoherent) {
  ShgCoupling coupling;
  coupling.beta = 0.8;
  const auto field = make_sv_field(PumpPulse{}, SpectralWindow{});
  const GainIntegrals in = field.integrals(1.5);
  const ShgResult r = eshg_on_field(field, in, 0.7, coupling, 0.01);
  EXPECT_NEAR(r.coh_quadratic / r.coh_linear, 0.8 * in.sinh4 / in.sinh2, 1e-12);
  EXPECT_NEAR(r.incoherent_total / r.coh_quadratic, 2.0 / 0.8, 1e-12);
  EXPECT_NEAR(r.incoherent_in_aperture, 0.01 * r.incoherent_total, 1e-15 * r.incoherent_total);
  EXPECT_LE(r.incoherent_in_aperture, r.incoherent_total);
  EXPECT_NEAR(r.total_detectable_coherent, r.coherent() + r.incoherent_in_aperture, 1e-20);
}

TEST(EshgFromSv, FixedGainTransmissionSquared) {
  const auto field = make_sv_field(PumpPulse{}, SpectralWindow{});
  const GainIntegrals in = field.integrals(2.0);
  const double base = eshg_on_field(field, in, 1.0, ShgCoupling{}, 0.0).coherent();
  EXPECT_NEAR(eshg_on_field(field, in, 0.7, ShgCoupling{}, 0.0).coherent() / base, 0.49, 1e-14);
  EXPECT_NEAR(eshg_on_field(field, in, 0.5, ShgCoupling{}, 0.0).coherent() / base, 0.25, 1e-14);
}

TEST(EnhancementRatio, Basics) {
  ShgResult a;
  a.coh_quadratic = 2.0;
  EXPECT_EQ(enhancement_ratio(a, a, EnhancementMode::CoherentOnly), 1.0);
  ShgResult sv;
  sv.coh_linear = 1.0;
  sv.coh_quadratic = 2.0;
  sv.incoherent_total = 4.0;
  EXPECT_EQ(enhancement_ratio(sv, a, EnhancementMode::CoherentOnly), 1.5);
  EXPECT_EQ(enhancement_ratio(sv, a, EnhancementMode::Total), 3.5);
  EXPECT_THROW(enhancement_ratio(sv, ShgResult{}, EnhancementMode::Total), DomainError);
}

TEST(EnhancementRatio, DivergesAtLowGain) {
  // Coherent-only ratio ~ c / <n>_m as <n>_m -> 0.
  const auto field = make_sv_field(PumpPulse{}, SpectralWindow{});
  const ShgCoupling coupling;
  const auto ratio = [&](double n) {
    const double g0 = std::asinh(std::sqrt(n));
    const GainIntegrals in = field.integrals(g0);
    const ShgResult sv = eshg_on_field(field, in, 1.0, coupling, 0.0);
    const ShgResult cl = classical_shg(matched_classical(field.summary_from(g0, in)), coupling);
    return enhancement_ratio(sv, cl, EnhancementMode::CoherentOnly);
  };
  const double r1 = ratio(1e-4), r2 = ratio(2e-4);
  EXPECT_NEAR(r1 / r2, 2.0, 2e-3);
  EXPECT_GT(r1, 1e3);
}

TEST(FlatTop, PerModeIdentity) {
  const FlatTopProfile profile(1.5e-3, 185e-15);
  const SvField<FlatTopProfile> field(profile, 19111.57);
  ShgCoupling coupling;
  coupling.beta = 1.0;
  for (double g : {0.2, 1.0, 2.5}) {
    const GainIntegrals in = field.integrals(g);
    const ShgResult sv = eshg_on_field(field, in, 1.0, coupling, 0.0);
    const double n = std::sinh(g) * std::sinh(g);
    const double cl = classical_yield_on(profile, field.mode_density() * in.sinh2, coupling);
    EXPECT_NEAR(sv.coherent() / cl, 1.0 + 1.0 / n, 1e-9 * (1.0 + 1.0 / n));
  }
}

TEST(MatchedClassical, CopiesSummary) {
  SvFieldSummary s;
  s.n_sv_per_pulse = 1e3;
  s.beam_fwhm = 1.48e-3;
  s.duration_fwhm = 173e-15;
  const ClassicalPulse p = matched_classical(s);
  EXPECT_EQ(p.photons_per_pulse, 1e3);
  EXPECT_EQ(p.beam_fwhm, 1.48e-3);
  EXPECT_EQ(p.duration_fwhm, 173e-15);
  EXPECT_EQ(p.wavelength, 1030e-9);
}

TEST(MatchedClassical, ZeroPhotonSummary) {
  const auto field = make_sv_field(PumpPulse{}, SpectralWindow{});
  const ClassicalPulse p = matched_classical(field.summary(0.0));
  EXPECT_EQ(p.photons_per_pulse, 0.0);
  EXPECT_EQ(p.beam_fwhm, 1.5e-3);
  EXPECT_EQ(p.duration_fwhm, 185e-15);
}
