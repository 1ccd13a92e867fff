#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "weakvel/errors.hpp"
#include "weakvel/information.hpp"

using namespace weakvel;

namespace {
constexpr double kLambda = 780e-9;
const double kK = 2.0 * std::numbers::pi / kLambda;
}  // namespace

TEST(FisherInformation, Values) {
  EXPECT_EQ(fisher_information_dt(0.0, 0.31, 1.0, true), 0.0);
  EXPECT_NEAR(fisher_information_dt(1e6, 0.31, 1.0, true), 93060.771668733036, 1e-8);
  EXPECT_NEAR(fisher_information_dt(1e6, 0.31, 1.0, false), 96100.0, 1e-8);
  const double f = fisher_information_dt(1e6, 0.31, 0.3, true);
  EXPECT_DOUBLE_EQ(1.0 / std::sqrt(fisher_information_dt(4e6, 0.31, 0.3, true)), 0.5 / std::sqrt(f));
  EXPECT_THROW(fisher_information_dt(1.0, 0.31, 0.0, true), DomainError);
}

TEST(FisherInformation, InverseRootMatchesTimingBound) {
  const double n = 3e7, phi = 0.2, tau = 0.4;
  EXPECT_NEAR(1.0 / std::sqrt(fisher_information_dt(n, phi, tau, true)), tau / (std::sqrt(n) * std::sin(phi)), 1e-18);
  const double dt_bound = 1.0 / std::sqrt(fisher_information_dt(n, phi, tau, false));
  EXPECT_NEAR(dt_bound, tau / (phi * std::sqrt(n)), 1e-18);
  // Propagating the small-angle timing bound through v = δt·φ/(2kτ²) gives the velocity bound.
  EXPECT_NEAR(dt_bound * phi / (2 * kK * tau * tau), crb_velocity(n, tau, kK), 1e-25);
}

TEST(CrbVelocity, ReferencePulseScale) {
  const double crb = crb_velocity(54e6, 0.833, kK);
  const long double k = 2.0L * std::numbers::pi_v<long double> / 780e-9L;
  const long double reference = 1.0L / (2.0L * k * 0.833L * std::sqrt(54e6L));
  EXPECT_NEAR(crb, static_cast<double>(reference), 1e-3 * crb);
  EXPECT_NEAR(crb, 1.01e-11, 0.01 * 1.01e-11);
}

TEST(CrbVelocity, ScalingAndIdentity) {
  EXPECT_DOUBLE_EQ(crb_velocity(4e6, 0.1, kK), 0.5 * crb_velocity(1e6, 0.1, kK));
  EXPECT_THROW(crb_velocity(0.0, 0.1, kK), DegenerateInputError);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> logn(0.0, 12.0), tau(1e-4, 100.0), lam(1e-7, 2e-6);
  for (int i = 0; i < 1000; ++i) {
    const double n = std::pow(10.0, logn(rng)), t = tau(rng), k = 2 * std::numbers::pi / lam(rng);
    EXPECT_NEAR(crb_velocity(n, t, k) * 2.0 * k * t * std::sqrt(n), 1.0, 4e-16);
  }
}

TEST(Snr, ReferenceDriveVoltages) {
  const double tau = 0.833, n = 54e6;
  const double expected[] = {55.938904130905919, 27.969452065452959, 13.984726032726480, 5.5938904130905919};
  const double reported[] = {54.0, 27.4, 14.7, 5.7};
  const double volts[] = {105e-3, 52.5e-3, 26.25e-3, 10.5e-3};
  for (int i = 0; i < 4; ++i) {
    const double v = volts[i] * 27e-9 / (6 * tau);
    const double s = snr(v, n, tau, kK);
    EXPECT_NEAR(s, expected[i], 1e-10);
    EXPECT_LT(std::abs(s - reported[i]) / reported[i], 0.08);
  }
}

TEST(Snr, LinearAndThreeFormsAgree) {
  EXPECT_EQ(snr(0.0, 1e6, 0.1, kK), 0.0);
  EXPECT_DOUBLE_EQ(snr(2e-10, 1e6, 0.1, kK), 2.0 * snr(1e-10, 1e6, 0.1, kK));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> v(-1e-8, 1e-8), phi(0.01, 1.5), tau(1e-3, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const auto f = snr_forms(v(rng), 1e7, tau(rng), phi(rng), kLambda);
    EXPECT_NEAR(f.time_shift, f.velocity_ratio, 1e-12 * f.velocity_ratio);
    EXPECT_NEAR(f.doppler_ratio, f.velocity_ratio, 1e-12 * f.velocity_ratio);
  }
}

TEST(EfficiencyRatio, UnitsOfTheBound) {
  const double crb = crb_velocity(1e6, 0.2, kK);
  EXPECT_DOUBLE_EQ(efficiency_ratio(crb, 1e6, 0.2, kK), 1.0);
  EXPECT_DOUBLE_EQ(efficiency_ratio(2 * crb, 1e6, 0.2, kK), 2.0);
}

TEST(BoundReport, CsvLayout) {
  const auto r = bound_report(54e6, 0.31, 0.833, kLambda, 60e-12);
  EXPECT_GT(r.crb_v, 0.0);
  EXPECT_NEAR(r.snr, 60e-12 / r.crb_v, 1e-12);
  std::ostringstream out;
  write_bound_report_csv(out, r);
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "n,phi_rad,tau_s,fisher_per_s2,crb_v_mps,snr");
  EXPECT_NE(text.find("5.40000000000000000e+07,3.09999999999999998e-01"), std::string::npos);
}
