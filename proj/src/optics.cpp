#include "weakvel/optics.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "weakvel/errors.hpp"

namespace weakvel {

void InterferometerParams::validate() const {
  if (!(wavelength > 0.0) || !std::isfinite(wavelength)) {
    throw DomainError(fmt::format("wavelength must be positive and finite, got {}", wavelength));
  }
  if (!std::isfinite(phi) || !std::isfinite(velocity)) {
    throw DomainError("post-selection angle and velocity must be finite");
  }
}

void InterferometerParams::require_dark_port() const {
  validate();
  if (!(phi > 0.0 && phi < 0.5 * std::numbers::pi)) {
    throw DomainError(
        fmt::format("post-selection angle must lie in (0, pi/2) for sampling and estimation, got {}", phi));
  }
}

void PulseSpec::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw DomainError(fmt::format("pulse width tau must be positive and finite, got {}", tau));
  }
  if (!(window > 0.0)) {
    throw DomainError(fmt::format("pulse window must be positive, got {}", window));
  }
  if (n_input == 0) throw DomainError("n_input must be positive");
  if (!(i0 > 0.0) || !std::isfinite(i0)) throw DomainError("peak intensity i0 must be positive");
}

void PiezoDrive::validate() const {
  if (!(f_m > 0.0)) throw DomainError(fmt::format("drive frequency must be positive, got {}", f_m));
  if (!(v_pp >= 0.0)) throw DomainError(fmt::format("peak-to-peak voltage must be >= 0, got {}", v_pp));
  if (!(alpha > 0.0)) throw DomainError(fmt::format("piezo response must be positive, got {}", alpha));
}

double input_intensity(double t, const PulseSpec& pulse) noexcept {
  if (std::abs(t) > pulse.window) return 0.0;
  const double x = t / pulse.tau;
  return pulse.i0 * std::exp(-0.5 * x * x);
}

double postselection_probability(double t, const InterferometerParams& params) noexcept {
  const double s = std::sin(params.phi + params.k() * params.velocity * t);
  return s * s;
}

double exact_output_intensity(double t, const InterferometerParams& params,
                              const PulseSpec& pulse) noexcept {
  const double in = input_intensity(t, pulse);
  return in == 0.0 ? 0.0 : in * postselection_probability(t, params);
}

double approx_output_intensity(double t, const InterferometerParams& params,
                               const PulseSpec& pulse) {
  const double s = std::sin(params.phi);
  const double x = (t - time_shift(params, pulse)) / pulse.tau;
  return pulse.i0 * s * s * std::exp(-0.5 * x * x);
}

double time_shift(const InterferometerParams& params, const PulseSpec& pulse) {
  if (params.phi == 0.0) {
    throw DomainError("time shift is undefined for a post-selection angle of zero");
  }
  return 2.0 * params.k() * params.velocity * pulse.tau * pulse.tau / params.phi;
}

double doppler_shift(double velocity, double wavelength) noexcept {
  return 2.0 * velocity / wavelength;
}

double piezo_velocity(const PiezoDrive& drive) noexcept {
  return 2.0 * drive.f_m * drive.v_pp * drive.alpha;
}

double calibrate_alpha(double v_dark_to_bright, double wavelength) {
  if (!(v_dark_to_bright > 0.0)) {
    throw DomainError("dark-to-bright voltage must be positive");
  }
  return 0.25 * wavelength / v_dark_to_bright;
}

double approximation_discrepancy(const InterferometerParams& params, const PulseSpec& pulse,
                                 double t_extent, int grid_points) {
  if (params.phi == 0.0) {
    throw DomainError("approximation is undefined for a post-selection angle of zero");
  }
  grid_points = std::max(grid_points, 2);
  const double kv = params.k() * params.velocity;
  const double sin_phi = std::sin(params.phi);
  const double half = t_extent * pulse.tau;
  const double step = 2.0 * half / (grid_points - 1);

  double worst = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    const double t = -half + i * step;
    const double exact = std::abs(std::sin(params.phi + kv * t) / sin_phi);
    const double approx = std::exp(kv * t / params.phi);
    worst = std::max(worst, std::abs(exact - approx) / exact);
  }
  return worst;
}

}  // namespace weakvel
