#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "svshg/csv.hpp"
#include "svshg/experiments.hpp"
#include "svshg/roots.hpp"

using namespace svshg;

TEST(DefaultSweep, PerScenario) {
  const SweepSpec a = default_sweep(Scenario::Fig2a);
  EXPECT_EQ(a.axis, SweepAxis::PumpEnergy);
  EXPECT_EQ(a.points, 25);
  EXPECT_TRUE(a.log_spacing);
  EXPECT_DOUBLE_EQ(a.start, 1e-6);
  EXPECT_DOUBLE_EQ(a.stop, 120e-6);
  const SweepSpec b = default_sweep(Scenario::Fig3b);
  EXPECT_EQ(b.axis, SweepAxis::Flux);
  EXPECT_EQ(b.losses, (std::vector<double>{0.6, 0.9}));
  EXPECT_EQ(default_sweep(Scenario::Fig3a).losses, (std::vector<double>{0.3, 0.5}));
}

TEST(ScenarioNames, RoundTrip) {
  for (Scenario s : {Scenario::Fig2a, Scenario::Fig2b, Scenario::Fig3a, Scenario::Fig3b,
                     Scenario::Fig4, Scenario::Calibrate}) {
    EXPECT_EQ(parse_scenario(scenario_name(s)), s);
  }
  EXPECT_FALSE(parse_scenario("fig5").has_value());
}

TEST(ExperimentConfig, Validation) {
  ExperimentConfig cfg = default_config(Scenario::Fig3a);
  cfg.sweep.axis = SweepAxis::PumpEnergy;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = default_config(Scenario::Fig2a);
  cfg.sweep.points = 2;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = default_config(Scenario::Fig2a);
  cfg.sweep.stop = cfg.sweep.start;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = default_config(Scenario::Fig3b);
  cfg.sweep.losses = {1.0};
  EXPECT_THROW(cfg.validate(), DomainError);
}

TEST(Fig2a, PointwiseEqOne) {
  const ExperimentConfig cfg = default_config(Scenario::Fig2a);
  const ScenarioResult r = run_scenario(cfg);
  ASSERT_EQ(r.rows.size(), 25u);
  const CrystalParams crystal = cfg.pdc_crystal();
  const double lambda = coupling_lambda(crystal, cfg.pump);
  double prev = 0.0;
  for (const SweepRow& row : r.rows) {
    const double np = photons_from_energy(row.swept, crystal.lambda_pump);
    EXPECT_NEAR(row.pump_photons / np, 1.0, 1e-12);
    EXPECT_NEAR(row.peak_gain, lambda * std::sqrt(np), 1e-12 * row.peak_gain);
    const SvFieldSummary s = sv_summary(crystal, cfg.pump, cfg.window, np);
    EXPECT_NEAR(row.n_sv / s.n_sv_per_pulse, 1.0, 1e-9);
    EXPECT_NEAR(row.k_m / s.k_m, 1.0, 1e-9);
    EXPECT_GT(row.n_sv, prev);
    prev = row.n_sv;
  }
  EXPECT_DOUBLE_EQ(r.rows.front().swept, 1e-6);
  EXPECT_DOUBLE_EQ(r.rows.back().swept, 120e-6);
  EXPECT_NEAR(r.summary.get("lowgain_slope_ratio"), 1.0, 5e-3);
}

TEST(Fig3a, SlopeRatiosEqualTransmission) {
  const ScenarioResult r = run_scenario(default_config(Scenario::Fig3a));
  EXPECT_DOUBLE_EQ(r.summary.get("slope_ratio[t=1.00]"), 1.0);
  EXPECT_NEAR(r.summary.get("slope_ratio[t=0.70]"), 0.7, 1e-6);
  EXPECT_NEAR(r.summary.get("slope_ratio[t=0.50]"), 0.5, 1e-6);
  ASSERT_EQ(r.rows.size(), 75u);
  for (const SweepRow& row : r.rows) EXPECT_NEAR(row.flux / row.swept, 1.0, 1e-9);
}

TEST(Fig3a, FixedGainExtractionIsQuadratic) {
  const ScenarioResult r = run_scenario(default_config(Scenario::Fig3a));
  ASSERT_EQ(r.extraction.size(), 3u);
  const double x = r.summary.get("extraction_flux");
  EXPECT_NEAR(x, 12.6e3, 1e-9 * 12.6e3);
  const double ts[] = {1.0, 0.7, 0.5};
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(r.extraction[i].flux, ts[i] * x, 1e-9 * x);
    EXPECT_NEAR(r.extraction[i].peak_gain, r.extraction[0].peak_gain, 1e-9);
    EXPECT_NEAR(r.extraction[i].shg_detectable / r.extraction[0].shg_detectable, ts[i] * ts[i],
                1e-9);
  }
  EXPECT_GE(r.summary.get("extraction_r2"), 1.0 - 1e-9);
}

TEST(Fig3a, NoiselessFitEqualsModelEfficiency) {
  // No detection chain in the loop: the linear-term fit returns the model eta.
  ExperimentConfig cfg = default_config(Scenario::Fig3a);
  cfg.detection.pmt_qe = 1.0;
  const ScenarioResult r = run_scenario(cfg);
  const ShgCoupling coupling = cfg.shg_coupling();
  const double d = mode_number_lowgain(cfg.pump, cfg.window) / pump_volume(cfg.pump);
  const double eta_model = coupling.path_efficiency * flux_coupling(coupling) * d;
  EXPECT_NEAR(r.summary.get("eta_linear[t=1.00]") / eta_model, 1.0, 1e-9);
  for (const SweepRow& row : r.rows) {
    EXPECT_EQ(row.measured, row.shg_detectable);
    EXPECT_EQ(row.counts, 0.0);
  }
}

TEST(Fig3a, NoisyRunIsSeededAndThreadIndependent) {
  ExperimentConfig cfg = default_config(Scenario::Fig3a);
  cfg.sweep.noise = true;
  cfg.sweep.seed = 77;
  cfg.detection.background_rate = 2e-7;
  const ScenarioResult a = run_scenario(cfg, {1});
  const ScenarioResult b = run_scenario(cfg, {4});
  EXPECT_EQ(format_csv(a.rows, Table::LossSweep), format_csv(b.rows, Table::LossSweep));
  cfg.sweep.seed = 78;
  const ScenarioResult c = run_scenario(cfg, {1});
  EXPECT_NE(format_csv(a.rows, Table::LossSweep), format_csv(c.rows, Table::LossSweep));
  for (const SweepRow& row : a.rows) {
    EXPECT_GT(row.counts, 0.0);
    EXPECT_GT(row.measured_std, 0.0);
  }
}

TEST(Fig3b, CrossoverReported) {
  const ScenarioResult r = run_scenario(default_config(Scenario::Fig3b));
  const double x = r.summary.get("crossover_n[t=0.10]");
  EXPECT_TRUE(std::isfinite(x));
  EXPECT_GT(x, 1.0);
  // Frozen model prediction (beta calibrated to the 9.3 crossover).
  EXPECT_NEAR(x, 2.3958, 5e-3);
}

TEST(Fig3b, SolverErrorCarriesRowContext) {
  ExperimentConfig cfg = default_config(Scenario::Fig3b);
  cfg.sweep.stop = 1e30;
  try {
    run_scenario(cfg);
    FAIL() << "expected RangeError";
  } catch (const RangeError& e) {
    EXPECT_NE(std::string(e.what()).find("row "), std::string::npos);
  }
}

TEST(Fig4, EnhancementCurves) {
  const ScenarioResult r = run_scenario(default_config(Scenario::Fig4));
  for (const SweepRow& row : r.rows) {
    EXPECT_GT(row.enhancement_total, 1.0);
    EXPECT_GE(row.enhancement_total, row.enhancement_coherent);
    EXPECT_NEAR(row.shg_sv / row.shg_classical, row.enhancement_coherent, 1e-12);
  }
  EXPECT_NEAR(r.summary.get("crossover_coherent"), 9.3, 0.05);
  EXPECT_EQ(r.summary.get("crossover_total_count"), 0.0);
}

TEST(Calibrate, DefaultBetaIsCalibrated) {
  const CalibrationResult c = calibrate(default_config(Scenario::Calibrate));
  EXPECT_NEAR(c.beta, kCalibratedBeta, 1e-4);
  EXPECT_NEAR(c.crossover_n, 9.3, 0.05);
  EXPECT_EQ(c.nonlinearity_scale, 0.92);
  EXPECT_EQ(c.path_efficiency, 0.90);
  EXPECT_NEAR(c.eta_post_path / c.eta_pre_path, 0.90, 1e-12);
}

TEST(Calibrate, DegenerateTargetReturnsOne) {
  ExperimentConfig cfg = default_config(Scenario::Fig4);
  cfg.coupling.beta = 1.0;
  const double crossing = run_scenario(cfg).summary.get("crossover_coherent");
  ExperimentConfig cal = default_config(Scenario::Calibrate);
  cal.targets.crossover_n = crossing;
  EXPECT_EQ(calibrate(cal).beta, 1.0);
}

TEST(Calibrate, UnreachableTarget) {
  ExperimentConfig cfg = default_config(Scenario::Calibrate);
  cfg.targets.crossover_n = 1.2;
  EXPECT_THROW(calibrate(cfg), CalibrationError);
}

TEST(Calibrate, FlatProfileEstimate) {
  // On a flat top the coherent ratio is beta + 1/n, so beta = 1 - 1/9.3.
  const FlatTopProfile profile(1.5e-3, 185e-15);
  const SvField<FlatTopProfile> field(profile, 19111.57);
  const double g = std::asinh(std::sqrt(9.3));
  const GainIntegrals in = field.integrals(g);
  const auto ratio_minus_one = [&](double beta) {
    ShgCoupling coupling;
    coupling.beta = beta;
    const ShgResult sv = eshg_on_field(field, in, 1.0, coupling, 0.0);
    return sv.coherent() / classical_yield_on(profile, field.mode_density() * in.sinh2, coupling) -
           1.0;
  };
  const double beta = bisect(ratio_minus_one, 1e-6, 1.0, 1e-12);
  EXPECT_NEAR(beta, 1.0 - 1.0 / 9.3, 1e-9);
  EXPECT_NEAR(beta, 0.90, 0.015);
}

TEST(CalibrateScenario, SummaryAndRows) {
  const ScenarioResult r = run_scenario(default_config(Scenario::Calibrate));
  EXPECT_NEAR(r.summary.get("beta"), kCalibratedBeta, 1e-4);
  EXPECT_NEAR(r.summary.get("calibrated_crossover"), 9.3, 0.05);
  EXPECT_EQ(r.rows.size(), 25u);
}

TEST(Summary, OrderedAndLookup) {
  Summary s;
  s.set("b", 1.0);
  s.set("a", 2.0);
  s.set("b", 3.0);
  ASSERT_EQ(s.entries().size(), 2u);
  EXPECT_EQ(s.entries()[0].first, "b");
  EXPECT_EQ(s.get("b"), 3.0);
  EXPECT_THROW(s.get("c"), NotFoundError);
}
