#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "weakvel/errors.hpp"
#include "weakvel/estimators.hpp"
#include "weakvel/sampler.hpp"

using namespace weakvel;

namespace {

constexpr double kLambda = 780e-9;
const double kK = 2.0 * std::numbers::pi / kLambda;

SamplerConfig config(double phi, double v, double tau, std::uint64_t n, std::uint64_t seed) {
  SamplerConfig c;
  c.params = {kLambda, phi, v};
  c.pulse = PulseSpec{tau, std::numeric_limits<double>::infinity(), n, 1.0};
  c.seed = seed;
  return c;
}

// Velocity for which the shifted-Gaussian peak moves by `fraction`·τ.
double velocity_for_shift(double fraction, double phi, double tau) { return fraction * phi / (2.0 * kK * tau); }

}  // namespace

TEST(SamplePulse, AcceptanceMatchesBinomial) {
  const auto s = sample_pulse(config(0.31, 0.0, 0.1, 1'000'000, 11));
  const double p = std::pow(std::sin(0.31), 2);
  const double n = 1e6;
  const double sigma = std::sqrt(n * p * (1 - p));
  EXPECT_LT(std::abs(static_cast<double>(s.n_detected()) - n * p), 5.0 * sigma);
  EXPECT_EQ(s.n_input, 1'000'000u);
  EXPECT_EQ(s.seed, 11u);
}

TEST(SamplePulse, StaticMirrorIsCentered) {
  const double tau = 0.1;
  const auto s = sample_pulse(config(0.31, 0.0, tau, 1'000'000, 12));
  const double se = tau / std::sqrt(static_cast<double>(s.n_detected()));
  EXPECT_LT(std::abs(oracle::mean(s.times)), 5.0 * se);
}

TEST(SamplePulse, MeanFollowsTimeShift) {
  const double tau = 0.1, phi = 0.31;
  const double v = velocity_for_shift(0.01, phi, tau);
  const auto c = config(phi, v, tau, 10'000'000, 13);
  const auto s = sample_pulse(c);
  const double shift = time_shift(c.params, c.pulse);
  EXPECT_NEAR(shift, 0.01 * tau, 1e-15);
  const double se = tau / std::sqrt(static_cast<double>(s.n_detected()));
  EXPECT_LT(std::abs(oracle::mean(s.times) - shift), 5.0 * se);
}

TEST(SamplePulse, SortedFiniteAndInsideWindow) {
  auto c = config(0.31, velocity_for_shift(0.02, 0.31, 0.2), 0.2, 200'000, 14);
  c.pulse.window = 0.1;
  const auto s = sample_pulse(c);
  ASSERT_GT(s.n_detected(), 0u);
  EXPECT_LE(s.n_detected(), s.n_input);
  EXPECT_TRUE(std::is_sorted(s.times.begin(), s.times.end()));
  for (double t : s.times) {
    ASSERT_TRUE(std::isfinite(t));
    ASSERT_LE(std::abs(t), 0.1);
  }
}

TEST(SamplePulse, DistributionMatchesExactDensity) {
  const double tau = 0.1, phi = 0.31;
  const double v = velocity_for_shift(0.2, phi, tau);  // kvτ = 0.1φ, clearly skewed
  const auto s = sample_pulse(config(phi, v, tau, 1'500'000, 15));
  ASSERT_GE(s.n_detected(), 100'000u);
  const oracle::ExactCdf cdf(tau, phi, kK * v, 8.0 * tau);
  const double d = oracle::ks_statistic(s.times, cdf);
  EXPECT_LT(d, oracle::ks_critical(0.001, s.n_detected()));

  // The same data against the unshifted Gaussian must be rejected.
  const double d_wrong = oracle::ks_statistic(s.times, [&](double t) { return oracle::normal_cdf(t / tau); });
  EXPECT_GT(d_wrong, oracle::ks_critical(0.001, s.n_detected()));
}

TEST(SamplePulse, TruncatedDistributionMatchesExactDensity) {
  const double tau = 1.0, phi = 0.275;
  const double v = velocity_for_shift(0.05, phi, tau);
  auto c = config(phi, v, tau, 1'500'000, 16);
  c.pulse.window = 0.5 * tau;
  const auto s = sample_pulse(c);
  ASSERT_GE(s.n_detected(), 100'000u);
  const oracle::ExactCdf cdf(tau, phi, kK * v, 0.5 * tau);
  EXPECT_LT(oracle::ks_statistic(s.times, cdf), oracle::ks_critical(0.001, s.n_detected()));
}

TEST(SamplePulse, QuantizationShiftsMeanByLessThanOneStep) {
  const double tau = 1e-3;
  auto c = config(0.31, velocity_for_shift(0.01, 0.31, tau), tau, 300'000, 17);
  const auto raw = sample_pulse(c);
  c.quantization = 350e-12;
  const auto q = sample_pulse(c);
  ASSERT_EQ(raw.n_detected(), q.n_detected());
  for (std::size_t i = 0; i < q.times.size(); i += 997) {
    const double steps = q.times[i] / c.quantization;
    EXPECT_NEAR(steps, std::round(steps), 1e-6);
  }
  const double delta = std::abs(oracle::mean(q.times) - oracle::mean(raw.times));
  EXPECT_LE(delta, c.quantization);
  EXPECT_LT(delta, 1e-3 * tau / std::sqrt(static_cast<double>(q.n_detected())));
}

TEST(SamplePulse, DeterministicGivenSeed) {
  const auto c = config(0.31, 1e-9, 0.05, 50'000, 99);
  EXPECT_EQ(sample_pulse(c).times, sample_pulse(c).times);
  auto other = c;
  other.seed = 100;
  EXPECT_NE(sample_pulse(c).times, sample_pulse(other).times);
}

TEST(SamplePulse, RejectsNonDarkPortAngle) {
  EXPECT_THROW(sample_pulse(config(0.0, 0.0, 0.1, 10, 1)), DomainError);
  EXPECT_THROW(sample_pulse(config(2.0, 0.0, 0.1, 10, 1)), DomainError);
  auto c = config(0.31, 0.0, 0.1, 10, 1);
  c.quantization = -1.0;
  EXPECT_THROW(sample_pulse(c), DomainError);
}

TEST(SamplePulseTrain, AlternatingSignsGiveOppositeShifts) {
  const double tau = 0.1, phi = 0.31;
  const auto c = config(phi, velocity_for_shift(0.05, phi, tau), tau, 2'000'000, 21);
  const auto train = sample_pulse_train(c, 2, true);
  ASSERT_EQ(train.size(), 2u);
  EXPECT_GT(oracle::mean(train[0].times), 0.0);
  EXPECT_LT(oracle::mean(train[1].times), 0.0);
  EXPECT_EQ(pulse_config(c, 1, true).params.velocity, -c.params.velocity);
  EXPECT_EQ(pulse_config(c, 1, false).params.velocity, c.params.velocity);
}

TEST(SamplePulseTrain, IndependentOfThreadCount) {
  const auto c = config(0.31, 3e-9, 0.02, 20'000, 22);
  const auto a = sample_pulse_train(c, 9, true, 1);
  const auto b = sample_pulse_train(c, 9, true, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].times, b[i].times);
    EXPECT_EQ(a[i].seed, b[i].seed);
  }
  EXPECT_NE(a[0].seed, a[1].seed);
  EXPECT_THROW(sample_pulse_train(c, 0, true), DomainError);
}

TEST(SamplePulseTrain, ThirteenPulsesGiveFiniteScatter) {
  const double tau = 0.05, phi = 0.31;
  const auto c = config(phi, velocity_for_shift(0.01, phi, tau), tau, 100'000, 23);
  const auto train = sample_pulse_train(c, 13, false);
  std::vector<VelocityEstimate> estimates;
  for (const auto& s : train) estimates.push_back(mean_arrival_estimator(s, c.params, c.pulse));
  const auto stats = repeat_statistics(std::span<const VelocityEstimate>(estimates));
  EXPECT_EQ(stats.count, 13u);
  EXPECT_TRUE(std::isfinite(stats.std_v));
  EXPECT_GT(stats.std_v, 0.0);
}

TEST(Histogram, EmptySampleGivesZeros) {
  const auto h = histogram(ArrivalSample{}, 0.1, 1.0);
  EXPECT_EQ(h.counts.size(), 20u);
  EXPECT_EQ(h.total(), 0.0);
}

TEST(Histogram, SinglePhotonAtCenter) {
  ArrivalSample s;
  s.times = {0.0};
  const auto h = histogram(s, 1.0, 1.5);
  ASSERT_EQ(h.centers.size(), 3u);
  EXPECT_DOUBLE_EQ(h.centers[1], 0.0);
  EXPECT_EQ(h.counts[1], 1.0);
  EXPECT_EQ(h.total(), 1.0);
}

TEST(Histogram, CountsOnlyInsideExtentAndClosesRightEdge) {
  ArrivalSample s;
  s.times = {-2.0, -1.0, 0.2, 1.0, 3.0};
  const auto h = histogram(s, 0.5, 1.0);
  EXPECT_EQ(h.total(), 3.0);
  EXPECT_EQ(h.counts.front(), 1.0);
  EXPECT_EQ(h.counts.back(), 1.0);
}

TEST(Histogram, BinsMatchPoissonExpectation) {
  const double tau = 0.1;
  const auto s = sample_pulse(config(0.31, 0.0, tau, 11'000'000, 31));
  ASSERT_GE(s.n_detected(), 1'000'000u);
  const double extent = 4.0 * tau;
  const auto h = histogram(s, tau / 20.0, extent);
  const double n = static_cast<double>(s.n_detected());
  int within = 0;
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    const double a = h.centers[i] - 0.5 * h.bin_width, b = h.centers[i] + 0.5 * h.bin_width;
    const double expected = n * (oracle::normal_cdf(b / tau) - oracle::normal_cdf(a / tau));
    if (std::abs(h.counts[i] - expected) <= 5.0 * std::sqrt(expected)) ++within;
  }
  EXPECT_GE(within, static_cast<int>(std::ceil(0.99 * static_cast<double>(h.counts.size()))));
}

TEST(ArrivalsCsv, RoundTripsExactly) {
  const auto c = config(0.31, 2e-9, 0.01, 5000, 41);
  const auto s = sample_pulse(c);
  std::stringstream ss;
  write_arrivals_csv(ss, s, c);
  EXPECT_EQ(ss.str().rfind("# weakvel arrivals seed=41 n_input=5000", 0), 0u);
  const auto back = read_arrivals_csv(ss);
  EXPECT_EQ(back.times, s.times);
  EXPECT_EQ(back.n_input, s.n_input);
  EXPECT_EQ(back.seed, s.seed);
}

TEST(HistogramCsv, Columns) {
  ArrivalSample s;
  s.times = {0.0, 0.1};
  std::stringstream ss;
  write_histogram_csv(ss, histogram(s, 1.0, 0.5));
  EXPECT_EQ(ss.str(), "bin_center_s,count\n0.00000000000000000e+00,2\n");
}
