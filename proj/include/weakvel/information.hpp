#pragma once

#include <cstdint>
#include <iosfwd>

namespace weakvel {

/// Fisher information about the time shift carried by `n` photons sent into
/// the interferometer, in 1/s². The exact form counts the N·sin²φ detected
/// photons; the approximate form replaces sin²φ with φ².
double fisher_information_dt(double n, double phi, double tau, bool exact);

/// Cramér-Rao bound on the velocity, 1/(2kτ√N). Independent of φ and of v.
/// Throws DegenerateInputError for n = 0.
double crb_velocity(double n, double tau, double k);

/// |v| / crb_velocity.
double snr(double v, double n, double tau, double k);

/// The three equivalent signal-to-noise expressions, evaluated separately.
struct SnrForms {
  double velocity_ratio;  ///< v/Δv
  double time_shift;      ///< (δt/τ)·φ·√N with δt = 2kvτ²/φ
  double doppler_ratio;   ///< f_d/Δf_d
};

SnrForms snr_forms(double v, double n, double tau, double phi, double wavelength);

/// empirical_std / crb_velocity; 1 means the estimator is efficient.
double efficiency_ratio(double empirical_std, double n, double tau, double k);

struct BoundReport {
  double n = 0.0;
  double phi = 0.0;
  double tau = 0.0;
  double fisher_dt = 0.0;  ///< small-angle form, the one the bound is built from
  double crb_v = 0.0;
  double snr = 0.0;
};

BoundReport bound_report(double n, double phi, double tau, double wavelength, double velocity);

/// Header n,phi_rad,tau_s,fisher_per_s2,crb_v_mps,snr and one row.
void write_bound_report_csv(std::ostream& out, const BoundReport& report);

}  // namespace weakvel
