#include <cmath>

#include <gtest/gtest.h>

#include "weakvel/config.hpp"
#include "weakvel/errors.hpp"
#include "weakvel/units.hpp"

using namespace weakvel;

TEST(ParseQuantity, UnitsConvertToSI) {
  EXPECT_DOUBLE_EQ(parse_quantity("16.7 ms", Dimension::Time), 0.0167);
  EXPECT_DOUBLE_EQ(parse_quantity("780nm", Dimension::Length), 780e-9);
  EXPECT_DOUBLE_EQ(parse_quantity("60 pm/s", Dimension::Velocity), 60e-12);
  EXPECT_DOUBLE_EQ(parse_quantity("27 pm/mV", Dimension::Response), 27e-9);
  EXPECT_DOUBLE_EQ(parse_quantity("10.5 mV", Dimension::Voltage), 10.5e-3);
  EXPECT_DOUBLE_EQ(parse_quantity("350 ps", Dimension::Time), 350e-12);
  EXPECT_DOUBLE_EQ(parse_quantity(" 1e6 ", Dimension::Dimensionless), 1e6);
  EXPECT_TRUE(std::isinf(parse_quantity("inf", Dimension::Time)));
  EXPECT_THROW(parse_quantity("16.7 mV", Dimension::Time), ConfigError);
  EXPECT_THROW(parse_quantity("fast", Dimension::Velocity), ConfigError);
  EXPECT_THROW(parse_quantity("3 furlongs", Dimension::Length), ConfigError);
}

TEST(ParseConfig, MinimalSingleFillsDefaults) {
  const auto c = parse_config("mode = single\n");
  EXPECT_EQ(c.mode, Mode::Single);
  EXPECT_DOUBLE_EQ(c.params.phi, 0.31);
  EXPECT_DOUBLE_EQ(c.params.wavelength, 780e-9);
  EXPECT_DOUBLE_EQ(c.detection_efficiency, 1.0);
  EXPECT_TRUE(c.pulse.full_gaussian());
}

TEST(ParseConfig, HumanUnitsAndLists) {
  const auto c = parse_config(R"(
# Pulse-width sweep
mode = sweep
master_seed = 0xdeadbeef
[optics]
wavelength = 780 nm
phi = 0.31 rad
[pulse]
tau = 16.7 ms
n_input = 1e6
quantization = 350 ps
[drive]
alpha = 27 pm/mV
[grid]
tau = 1.67 ms, 16.7 ms, 833 ms
v_pp = 105 mV, 10.5 mV
[campaign]
trials = 100
)");
  EXPECT_EQ(c.mode, Mode::Sweep);
  EXPECT_DOUBLE_EQ(c.pulse.tau, 0.0167);
  EXPECT_EQ(c.master_seed, 0xdeadbeefULL);
  ASSERT_EQ(c.grid.tau.size(), 3u);
  EXPECT_DOUBLE_EQ(c.grid.tau[2], 0.833);
  ASSERT_EQ(c.grid.v_pp.size(), 2u);
  EXPECT_DOUBLE_EQ(c.grid.v_pp[1], 10.5e-3);
  EXPECT_EQ(c.grid.n_input, std::vector<std::uint64_t>{1'000'000});
  EXPECT_DOUBLE_EQ(c.drive->alpha, 27e-9);
  EXPECT_DOUBLE_EQ(c.quantization, 350e-12);
  EXPECT_EQ(c.trials, 100u);
  EXPECT_DOUBLE_EQ(c.period_factor, 6.0);
  EXPECT_TRUE(c.alternate_sign);
}

TEST(ParseConfig, ModeDefaults) {
  const auto sweep = parse_config("mode = efficiency");
  EXPECT_EQ(sweep.grid.tau.size(), 5u);
  EXPECT_EQ(sweep.grid.v_pp.size(), 4u);
  EXPECT_FALSE(sweep.alternate_sign);
  EXPECT_EQ(sweep.trials, 200u);
  EXPECT_EQ(sweep.pulse.n_input, 1'000'000u);

  const auto trunc = parse_config("mode = truncated\n[optics]\nphi = 0.275\n");
  EXPECT_EQ(trunc.repeats, 13u);
  EXPECT_EQ(trunc.grid.tau, std::vector<double>{50.0});
  EXPECT_DOUBLE_EQ(trunc.period_factor, 1.0);
  EXPECT_EQ(trunc.grid.v_pp.size(), 3u);

  EXPECT_EQ(parse_config("", Mode::Sweep).mode, Mode::Sweep);
}

TEST(ParseConfig, ValidationNamesTheField) {
  try {
    parse_config("mode = single\n[pulse]\ntau = -1 ms\n");
    FAIL() << "negative tau accepted";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "pulse.tau");
  }
  try {
    parse_config("mode = single\n[optics]\nphi = 2.0\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "optics.phi");
  }
  EXPECT_THROW(parse_config("mode = sweep\n[grid]\nv_pp = 1 mV\nvelocity = 1 pm/s\n"), ConfigError);
  EXPECT_THROW(parse_config("mode = sweep\n[pulse]\nwindow = 1 s\n"), ConfigError);
  EXPECT_THROW(parse_config("mode = efficiency\n[campaign]\ntrials = 0\n"), ConfigError);
  EXPECT_THROW(parse_config("mode = single\n[campaign]\ndetection_efficiency = 1.5\n"), ConfigError);
  EXPECT_THROW(parse_config("[optics]\nphi = 0.3\n"), ConfigError);
}

TEST(ParseConfig, SyntaxErrorsCarryLineNumbers) {
  auto line_of = [](const char* text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return e.line();
    }
    return -1;
  };
  EXPECT_EQ(line_of("mode = single\n[optics]\ncolour = red\n"), 3);
  EXPECT_EQ(line_of("mode = single\n\n[nonsense]\n"), 3);
  EXPECT_EQ(line_of("mode = single\nnot a pair\n"), 2);
  EXPECT_EQ(line_of("mode = single\n[pulse]\ntau = 1 s\ntau = 2 s\n"), 4);
  EXPECT_EQ(line_of("mode = single\n[pulse]\ntau = 3 mV\n"), 3);
  EXPECT_EQ(line_of("mode = warp\n"), 1);
  EXPECT_EQ(line_of("mode = single\n[pulse]\nn_input = 2.5\n"), 3);
  EXPECT_EQ(line_of("mode = single\n[optics\n"), 2);
}

TEST(Describe, StableAndSensitive) {
  const auto a = parse_config("mode = sweep\nmaster_seed = 1\n");
  auto b = a;
  EXPECT_EQ(describe(a), describe(b));
  EXPECT_EQ(fnv1a64(describe(a)), fnv1a64(describe(b)));
  b.master_seed = 2;
  EXPECT_NE(fnv1a64(describe(a)), fnv1a64(describe(b)));
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}
