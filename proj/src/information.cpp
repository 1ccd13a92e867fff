#include "weakvel/information.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include <fmt/core.h>
#include <fmt/ostream.h>

#include "weakvel/errors.hpp"

namespace weakvel {

double fisher_information_dt(double n, double phi, double tau, bool exact) {
  if (!(n >= 0.0)) throw DomainError("photon count must be non-negative");
  if (!(tau > 0.0)) throw DomainError("pulse width must be positive");
  const double s = exact ? std::sin(phi) : phi;
  return n * s * s / (tau * tau);
}

double crb_velocity(double n, double tau, double k) {
  if (n == 0.0) throw DegenerateInputError("the velocity bound is infinite without photons");
  if (!(n > 0.0) || !(tau > 0.0) || !(k > 0.0)) {
    throw DomainError("bound needs positive photon count, pulse width and wavenumber");
  }
  return 1.0 / (2.0 * k * tau * std::sqrt(n));
}

double snr(double v, double n, double tau, double k) {
  return std::abs(v) / crb_velocity(n, tau, k);
}

SnrForms snr_forms(double v, double n, double tau, double phi, double wavelength) {
  const double k = 2.0 * std::numbers::pi / wavelength;
  const double dv = crb_velocity(n, tau, k);
  const double delta_t = 2.0 * k * std::abs(v) * tau * tau / phi;
  const double f_d = 2.0 * std::abs(v) / wavelength;
  const double df_d = 2.0 * dv / wavelength;
  return {std::abs(v) / dv, delta_t / tau * phi * std::sqrt(n), f_d / df_d};
}

double efficiency_ratio(double empirical_std, double n, double tau, double k) {
  return empirical_std / crb_velocity(n, tau, k);
}

BoundReport bound_report(double n, double phi, double tau, double wavelength, double velocity) {
  const double k = 2.0 * std::numbers::pi / wavelength;
  BoundReport r;
  r.n = n;
  r.phi = phi;
  r.tau = tau;
  r.fisher_dt = fisher_information_dt(n, phi, tau, false);
  r.crb_v = crb_velocity(n, tau, k);
  r.snr = snr(velocity, n, tau, k);
  return r;
}

void write_bound_report_csv(std::ostream& out, const BoundReport& r) {
  out << "n,phi_rad,tau_s,fisher_per_s2,crb_v_mps,snr\n";
  fmt::print(out, "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}\n", r.n, r.phi, r.tau,
             r.fisher_dt, r.crb_v, r.snr);
}

}  // namespace weakvel
