#pragma once

#include <cstdint>
#include <limits>
#include <numbers>

namespace weakvel {

/// Michelson interferometer tuned near its dark port, one arm's mirror
/// moving at constant `velocity`.
struct InterferometerParams {
  double wavelength = 780e-9;  ///< meters
  double phi = 0.31;           ///< post-selection angle (half the phase offset), radians
  double velocity = 0.0;       ///< mirror velocity, m/s, signed

  /// Wavenumber 2π/λ in rad/m; always derived from `wavelength`.
  double k() const noexcept { return 2.0 * std::numbers::pi / wavelength; }

  /// Throws DomainError unless the wavelength is positive and all fields
  /// are finite.
  void validate() const;

  /// validate() plus 0 < φ < π/2. Required by every sampling or estimation
  /// path since those divide by φ.
  void require_dark_port() const;
};

/// Gaussian intensity envelope I0·exp(−t²/2τ²), optionally restricted to
/// |t| ≤ window.
struct PulseSpec {
  double tau = 1.0;  ///< seconds
  double window = std::numeric_limits<double>::infinity();  ///< half-width, seconds
  std::uint64_t n_input = 1'000'000;  ///< photons offered per pulse
  double i0 = 1.0;                    ///< peak intensity scale

  bool full_gaussian() const noexcept { return window == std::numeric_limits<double>::infinity(); }

  /// Pulse cut to |t| ≤ τ/2, where the envelope stays above exp(−1/8) of its peak.
  static PulseSpec truncated(double tau, std::uint64_t n_input, double i0 = 1.0) {
    return PulseSpec{tau, 0.5 * tau, n_input, i0};
  }

  void validate() const;
};

/// Triangle-wave piezo drive of the moving mirror.
struct PiezoDrive {
  double f_m = 0.1;      ///< drive frequency, Hz
  double v_pp = 0.0;     ///< peak-to-peak voltage, V
  double alpha = 27e-9;  ///< response, m/V (27 pm/mV)

  void validate() const;
};

double input_intensity(double t, const PulseSpec& pulse) noexcept;

/// Probability sin²(φ + k·v·t) that a photon entering at time t leaves
/// through the dark port.
double postselection_probability(double t, const InterferometerParams& params) noexcept;

/// Dark-port photon rate I_in(t)·sin²(φ + kvt).
double exact_output_intensity(double t, const InterferometerParams& params,
                              const PulseSpec& pulse) noexcept;

/// Shifted-Gaussian approximation I0·sin²φ·exp[−(t − δt)²/2τ²], valid for
/// kvτ ≪ φ. Ignores the pulse window.
double approx_output_intensity(double t, const InterferometerParams& params,
                               const PulseSpec& pulse);

/// Peak shift δt = 2kvτ²/φ of the dark-port pulse. Throws DomainError for φ = 0.
double time_shift(const InterferometerParams& params, const PulseSpec& pulse);

/// Doppler shift 2v/λ in Hz.
double doppler_shift(double velocity, double wavelength) noexcept;

/// Mirror speed 2·f_m·V_pp·α under triangle drive.
double piezo_velocity(const PiezoDrive& drive) noexcept;

/// Piezo response from the voltage that moves the output from dark to bright
/// port, a λ/4 mirror displacement. Throws DomainError for a non-positive voltage.
double calibrate_alpha(double v_dark_to_bright, double wavelength);

/// Maximum relative error of exp(kvt/φ) against |sin(φ + kvt)/sin φ| over
/// t ∈ [−t_extent·τ, t_extent·τ] on a uniform grid of `grid_points` points.
double approximation_discrepancy(const InterferometerParams& params, const PulseSpec& pulse,
                                 double t_extent, int grid_points = 4096);

}  // namespace weakvel
