#include "weakvel/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/core.h>

#include "weakvel/errors.hpp"

namespace weakvel {

std::string_view estimator_name(EstimatorKind kind) noexcept {
  switch (kind) {
    case EstimatorKind::MeanArrival: return "mean_arrival";
    case EstimatorKind::TruncatedFit: return "truncated_fit";
  }
  return "unknown";
}

double estimate_phi(std::uint64_t n_detected, std::uint64_t n_input) {
  if (n_detected == 0) throw DegenerateInputError("no photons detected at the dark port");
  if (n_detected > n_input) {
    throw DomainError(fmt::format("detected count {} exceeds input count {}", n_detected, n_input));
  }
  return std::asin(std::sqrt(static_cast<double>(n_detected) / static_cast<double>(n_input)));
}

double velocity_from_shift(double delta_t, const InterferometerParams& params, double tau) {
  return delta_t * params.phi / (2.0 * params.k() * tau * tau);
}

VelocityEstimate mean_arrival_estimator(const ArrivalSample& sample, const InterferometerParams& params,
                                        const PulseSpec& pulse) {
  params.require_dark_port();
  pulse.validate();
  if (!pulse.full_gaussian()) {
    throw PreconditionError("the mean-arrival estimator needs a full Gaussian pulse");
  }
  const std::size_t n = sample.times.size();
  if (n < 2) {
    throw DegenerateInputError(
        fmt::format("mean-arrival estimate needs at least 2 detected photons, got {}", n));
  }

  const double mean = std::accumulate(sample.times.begin(), sample.times.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double t : sample.times) ss += (t - mean) * (t - mean);

  VelocityEstimate e;
  e.estimator = EstimatorKind::MeanArrival;
  e.delta_t_hat = mean;
  e.v_hat = velocity_from_shift(mean, params, pulse.tau);
  e.f_d_hat = doppler_shift(e.v_hat, params.wavelength);
  e.std_error = velocity_from_shift(pulse.tau / std::sqrt(static_cast<double>(n)), params, pulse.tau);
  e.arrival_sd = std::sqrt(ss / static_cast<double>(n - 1));
  e.n_used = n;
  return e;
}

namespace {

struct Normal2 {
  double jtj[2][2];  // JᵀJ of the model derivatives
  double grad[2];    // ∇ of half the squared residual
  double ssr;
};

// Residual r_i = y_i − A·g_i with g_i = exp(−(c_i − δ)²/2τ²).
// ∂model/∂A = g_i, ∂model/∂δ = A·g_i·(c_i − δ)/τ².
Normal2 assemble(const Histogram& h, double amplitude, double shift, double tau) {
  Normal2 n{};
  const double inv_tau2 = 1.0 / (tau * tau);
  for (std::size_t i = 0; i < h.centers.size(); ++i) {
    const double d = h.centers[i] - shift;
    const double g = std::exp(-0.5 * d * d * inv_tau2);
    const double r = h.counts[i] - amplitude * g;
    const double ja = g;
    const double jd = amplitude * g * d * inv_tau2;
    n.jtj[0][0] += ja * ja;
    n.jtj[0][1] += ja * jd;
    n.jtj[1][1] += jd * jd;
    n.grad[0] -= ja * r;
    n.grad[1] -= jd * r;
    n.ssr += r * r;
  }
  n.jtj[1][0] = n.jtj[0][1];
  return n;
}

double sum_squared_residuals(const Histogram& h, double amplitude, double shift, double tau) {
  double ssr = 0.0;
  const double inv_tau2 = 1.0 / (tau * tau);
  for (std::size_t i = 0; i < h.centers.size(); ++i) {
    const double d = h.centers[i] - shift;
    const double r = h.counts[i] - amplitude * std::exp(-0.5 * d * d * inv_tau2);
    ssr += r * r;
  }
  return ssr;
}

}  // namespace

FitResult fit_truncated(const Histogram& hist, double tau, const FitOptions& options) {
  if (hist.centers.empty() || hist.centers.size() != hist.counts.size()) {
    throw DegenerateInputError("cannot fit an empty histogram");
  }
  if (!(tau > 0.0)) throw DomainError("fit needs a positive pulse width");
  const double total = hist.total();
  if (!(total > 0.0)) throw DegenerateInputError("cannot fit an all-zero histogram");

  // Initial guess: peak bin for A, count-weighted centroid clipped to the data span for δt.
  double amplitude = *std::max_element(hist.counts.begin(), hist.counts.end());
  double centroid = 0.0;
  for (std::size_t i = 0; i < hist.centers.size(); ++i) centroid += hist.counts[i] * hist.centers[i];
  centroid /= total;
  const double lo = hist.centers.front() - 0.5 * hist.bin_width;
  const double hi = hist.centers.back() + 0.5 * hist.bin_width;
  double shift = std::clamp(centroid, lo, hi);

  FitResult fit;
  fit.total_counts = total;
  Normal2 normal = assemble(hist, amplitude, shift, tau);
  const double g0 = std::hypot(normal.grad[0], normal.grad[1]);
  fit.residual_history.push_back(std::sqrt(normal.ssr));

  double lambda = 1e-3;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    fit.iterations = iter + 1;
    const double gnorm = std::hypot(normal.grad[0], normal.grad[1]);
    if (gnorm <= options.gradient_tol * g0 || gnorm == 0.0) {
      fit.converged = true;
      break;
    }

    // Marquardt scaling: damp each diagonal entry by its own magnitude.
    const double a = normal.jtj[0][0] * (1.0 + lambda);
    const double b = normal.jtj[0][1];
    const double d = normal.jtj[1][1] * (1.0 + lambda);
    const double det = a * d - b * b;
    if (!(det > 0.0) || !std::isfinite(det)) {
      lambda *= 10.0;
      if (lambda > 1e20) break;
      continue;
    }
    const double step_a = (-d * normal.grad[0] + b * normal.grad[1]) / det;
    const double step_d = (b * normal.grad[0] - a * normal.grad[1]) / det;

    const bool tiny = std::abs(step_a) <= options.relative_step_tol * std::abs(amplitude) &&
                      std::abs(step_d) <= options.relative_step_tol * (std::abs(shift) + tau);

    const double trial_ssr = sum_squared_residuals(hist, amplitude + step_a, shift + step_d, tau);
    if (trial_ssr <= normal.ssr) {
      amplitude += step_a;
      shift += step_d;
      normal = assemble(hist, amplitude, shift, tau);
      fit.residual_history.push_back(std::sqrt(normal.ssr));
      lambda = std::max(lambda * 0.1, 1e-12);
      if (tiny) {
        fit.converged = true;
        break;
      }
    } else {
      if (tiny) {
        // Rounding noise dominates any further progress: already at the minimum.
        fit.converged = true;
        break;
      }
      lambda *= 10.0;
      if (lambda > 1e20) break;
    }
  }

  fit.amplitude = amplitude;
  fit.delta_t_hat = shift;
  fit.residual_norm = std::sqrt(normal.ssr);
  fit.gradient_norm = std::hypot(normal.grad[0], normal.grad[1]);
  const double dof = static_cast<double>(hist.centers.size()) - 2.0;
  const double det = normal.jtj[0][0] * normal.jtj[1][1] - normal.jtj[0][1] * normal.jtj[0][1];
  fit.delta_t_std_error = (dof > 0.0 && det > 0.0)
                              ? std::sqrt(normal.ssr / dof * normal.jtj[0][0] / det)
                              : std::numeric_limits<double>::quiet_NaN();
  if (!std::isfinite(fit.residual_norm)) fit.converged = false;
  return fit;
}

VelocityEstimate fit_velocity(const FitResult& fit, const InterferometerParams& params,
                              const PulseSpec& pulse) {
  if (!fit.converged) {
    throw PreconditionError(
        fmt::format("fit did not converge after {} iterations", fit.iterations));
  }
  params.require_dark_port();
  VelocityEstimate e;
  e.estimator = EstimatorKind::TruncatedFit;
  e.delta_t_hat = fit.delta_t_hat;
  e.v_hat = velocity_from_shift(fit.delta_t_hat, params, pulse.tau);
  e.f_d_hat = doppler_shift(e.v_hat, params.wavelength);
  e.n_used = static_cast<std::uint64_t>(std::llround(fit.total_counts));
  if (std::isfinite(fit.delta_t_std_error)) {
    e.std_error = velocity_from_shift(fit.delta_t_std_error, params, pulse.tau);
  }
  return e;
}

RepeatStatistics repeat_statistics(std::span<const double> values) {
  if (values.size() < 2) {
    throw DegenerateInputError(
        fmt::format("repeat statistics need at least 2 estimates, got {}", values.size()));
  }
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0)), values.size()};
}

RepeatStatistics repeat_statistics(std::span<const VelocityEstimate> estimates) {
  std::vector<double> v;
  v.reserve(estimates.size());
  for (const auto& e : estimates) v.push_back(e.v_hat);
  return repeat_statistics(std::span<const double>(v));
}

}  // namespace weakvel
