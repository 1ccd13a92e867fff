#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "weakvel/optics.hpp"
#include "weakvel/sampler.hpp"

namespace weakvel {

enum class EstimatorKind { MeanArrival, TruncatedFit };

std::string_view estimator_name(EstimatorKind kind) noexcept;

struct VelocityEstimate {
  EstimatorKind estimator = EstimatorKind::MeanArrival;
  double delta_t_hat = 0.0;  ///< s
  double v_hat = 0.0;        ///< m/s
  double f_d_hat = 0.0;      ///< Hz, always 2·v_hat/λ
  /// Standard error of v_hat. MeanArrival fills it from τ/√n_used.
  std::optional<double> std_error;
  /// Sample standard deviation of the arrival times (MeanArrival only).
  std::optional<double> arrival_sd;
  std::uint64_t n_used = 0;
};

struct FitResult {
  double amplitude = 0.0;
  double delta_t_hat = 0.0;
  bool converged = false;
  int iterations = 0;
  double residual_norm = 0.0;  ///< sqrt of the sum of squared residuals
  double gradient_norm = 0.0;
  double total_counts = 0.0;  ///< photons in the fitted histogram
  /// Asymptotic standard error of delta_t_hat from the residual variance and
  /// the inverse normal matrix. NaN when there are no spare degrees of freedom.
  double delta_t_std_error = 0.0;
  /// Residual norm after the initial guess and after every accepted step.
  std::vector<double> residual_history;
};

struct FitOptions {
  int max_iterations = 200;
  double relative_step_tol = 1e-10;
  double gradient_tol = 1e-8;  ///< relative to the gradient norm at the initial guess
};

/// arcsin(√(n_detected/n_input)). The small-angle form √(N_φ/N) differs by
/// O(φ³). Throws DegenerateInputError when nothing was detected.
double estimate_phi(std::uint64_t n_detected, std::uint64_t n_input);

/// Inverts δt = 2kvτ²/φ.
double velocity_from_shift(double delta_t, const InterferometerParams& params, double tau);

/// δt̂ = mean arrival time, v̂ from the inverted time shift. Needs a full
/// Gaussian pulse and at least two detected photons.
VelocityEstimate mean_arrival_estimator(const ArrivalSample& sample, const InterferometerParams& params,
                                        const PulseSpec& pulse);

/// Least-squares fit of A·exp[−(c − δt)²/2τ²] to binned counts with τ held
/// fixed, by damped Gauss-Newton (Levenberg-Marquardt). Non-convergence is
/// reported through FitResult::converged, not thrown.
FitResult fit_truncated(const Histogram& hist, double tau, const FitOptions& options = {});

/// Velocity from a converged fit. Throws PreconditionError otherwise.
VelocityEstimate fit_velocity(const FitResult& fit, const InterferometerParams& params,
                              const PulseSpec& pulse);

struct RepeatStatistics {
  double mean_v = 0.0;
  double std_v = 0.0;  ///< sample standard deviation, n − 1 denominator
  std::size_t count = 0;
};

RepeatStatistics repeat_statistics(std::span<const VelocityEstimate> estimates);

/// Same statistics over raw values.
RepeatStatistics repeat_statistics(std::span<const double> values);

}  // namespace weakvel
