#include <gtest/gtest.h>

#include <cmath>

#include "svshg/measurement.hpp"

using namespace svshg;

TEST(ApertureFraction, DefaultGeometry) {
  EXPECT_NEAR(aperture_fraction(DetectionChain{}), 1.0 / 144.0, 1e-15);
  EXPECT_LT(aperture_fraction(DetectionChain{}), 0.007);
}

TEST(ApertureFraction, EqualDiametersAndScaling) {
  DetectionChain c;
  c.aperture_diameter = c.incoherent_farfield_diameter;
  EXPECT_EQ(aperture_fraction(c), 1.0);
  c = DetectionChain{};
  const double base = aperture_fraction(c);
  c.aperture_diameter *= 0.5;
  EXPECT_NEAR(aperture_fraction(c), 0.25 * base, 1e-16);
  c = DetectionChain{};
  c.aperture_diameter *= 3.3;
  c.incoherent_farfield_diameter *= 3.3;
  EXPECT_NEAR(aperture_fraction(c), base, 1e-15);
}

TEST(DetectionChain, Validation) {
  DetectionChain c;
  c.pmt_qe = 1.4;
  EXPECT_THROW(c.validate(), DomainError);
  c = DetectionChain{};
  c.aperture_diameter = 20e-3;
  EXPECT_THROW(c.validate(), DomainError);
  c = DetectionChain{};
  c.acquisition_time = 1e-9;
  EXPECT_THROW(c.validate(), DomainError);
}

TEST(SimulateCounts, ZeroMean) {
  const CountRun r = simulate_counts(0.0, DetectionChain{}, 1);
  EXPECT_EQ(r.total_counts, 0u);
  EXPECT_EQ(r.pulses, 1.5e8);
}

TEST(SimulateCounts, ExpectedCounts) {
  EXPECT_NEAR(2.1e-6 * 0.4 * DetectionChain{}.pulses(), 126.0, 1e-9);
  // Mean of many runs is near 126.
  double sum = 0.0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    sum += static_cast<double>(simulate_counts(2.1e-6, DetectionChain{}, s).total_counts);
  }
  EXPECT_NEAR(sum / 200.0, 126.0, 3.0 * std::sqrt(126.0 / 200.0));
}

TEST(SimulateCounts, Deterministic) {
  const CountRun a = simulate_counts(2.1e-6, DetectionChain{}, 99);
  const CountRun b = simulate_counts(2.1e-6, DetectionChain{}, 99);
  EXPECT_EQ(a.total_counts, b.total_counts);
  EXPECT_EQ(a.counts_per_pulse(), b.counts_per_pulse());
}

TEST(SimulateCounts, Errors) {
  EXPECT_THROW(simulate_counts(-1.0, DetectionChain{}, 1), DomainError);
  DetectionChain c;
  c.rep_rate = 1.0;
  c.acquisition_time = 0.1;
  EXPECT_THROW(simulate_counts(1.0, c, 1), DomainError);
}

TEST(SimulateCounts, PhotonUnits) {
  CountRun r;
  r.total_counts = 126;
  r.pulses = 1.5e8;
  r.pmt_qe = 0.4;
  EXPECT_NEAR(r.counts_per_pulse(), 8.4e-7, 1e-20);
  EXPECT_NEAR(r.counts_std_error(), std::sqrt(126.0) / 1.5e8, 1e-22);
  EXPECT_NEAR(r.mean_photons(), 2.1e-6, 1e-19);
  EXPECT_NEAR(r.std_error_photons(), std::sqrt(126.0) / 1.5e8 / 0.4, 1e-20);
}

TEST(SimulateCountsProperty, MonteCarloMean) {
  DetectionChain c;
  c.background_rate = 3e-7;
  const double mean = 1.7e-6;
  const double expected = c.pmt_qe * (mean + c.background_rate) * c.pulses();
  double sum = 0.0;
  const int runs = 1000;
  for (int s = 0; s < runs; ++s) {
    sum += static_cast<double>(simulate_counts(mean, c, derive_seed(5, s)).total_counts);
  }
  const double std_error = std::sqrt(expected / runs);
  EXPECT_NEAR(sum / runs, expected, 3.0 * std_error);
}

TEST(BackgroundSubtract, Identity) {
  CountRun s{126, 1.5e8, 0.4}, b{0, 1.5e8, 0.4};
  const CorrectedSignal c = background_subtract(s, b);
  EXPECT_EQ(c.mean, s.counts_per_pulse());
  EXPECT_EQ(c.std, s.counts_std_error());
}

TEST(BackgroundSubtract, EqualRuns) {
  CountRun s{50, 1e6, 0.4};
  const CorrectedSignal c = background_subtract(s, s);
  EXPECT_EQ(c.mean, 0.0);
  EXPECT_GT(c.std, 0.0);
}

TEST(BackgroundSubtract, Quadrature) {
  CountRun s{126, 1.5e8, 0.4}, b{26, 1.5e8, 0.4};
  const CorrectedSignal c = background_subtract(s, b);
  EXPECT_NEAR(c.mean, 100.0 / 1.5e8, 1e-20);
  EXPECT_NEAR(c.mean, 6.67e-7, 0.005e-7);
  EXPECT_NEAR(c.std, std::sqrt(152.0) / 1.5e8, 1e-22);
}

TEST(BackgroundSubtract, NegativeNotClamped) {
  CountRun s{10, 1e6, 0.4}, b{30, 1e6, 0.4};
  EXPECT_LT(background_subtract(s, b).mean, 0.0);
}

TEST(BackgroundSubtract, Linear) {
  CountRun s{500, 1e6, 0.4}, b{120, 1e6, 0.4};
  const double recovered = background_subtract(s, b).mean + b.counts_per_pulse();
  EXPECT_DOUBLE_EQ(recovered, s.counts_per_pulse());
}

TEST(BackgroundSubtract, PulseMismatch) {
  EXPECT_THROW(background_subtract(CountRun{1, 10, 1}, CountRun{1, 11, 1}), ShapeError);
}

TEST(DeriveSeed, DistinctStreams) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  EXPECT_EQ(derive_seed(42, 7), derive_seed(42, 7));
}
