#include "weakvel/campaign.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include <fmt/core.h>

#include "weakvel/errors.hpp"
#include "weakvel/information.hpp"
#include "weakvel/parallel.hpp"
#include "weakvel/rng.hpp"

namespace weakvel {

namespace {

struct GridPoint {
  double tau;
  double v_pp;  // 0 for velocity grids
  std::uint64_t n;
  double v_true;
};

struct TrialOutcome {
  bool ok = false;
  double v_folded = 0.0;
  std::optional<double> std_error;
  std::uint64_t n_detected = 0;
};

std::vector<GridPoint> expand_grid(const CampaignConfig& c) {
  const bool from_drive = !c.grid.v_pp.empty();
  const auto& drive_values = from_drive ? c.grid.v_pp : c.grid.velocity;
  std::vector<GridPoint> points;
  for (double tau : c.grid.tau) {
    for (double value : drive_values) {
      for (std::uint64_t n : c.grid.n_input) {
        points.push_back({tau, from_drive ? value : 0.0, c.effective_n(n), grid_velocity(c, tau, value, from_drive)});
      }
    }
  }
  return points;
}

PulseSpec pulse_for(const CampaignConfig& c, double tau, std::uint64_t n) {
  PulseSpec p = c.pulse;
  p.tau = tau;
  p.n_input = n;
  p.window = c.mode == Mode::Truncated ? 0.5 * tau : std::numeric_limits<double>::infinity();
  return p;
}

// Histogram binning used for every truncated fit: τ/100 over ±window.
FitResult fit_sample(const ArrivalSample& sample, const PulseSpec& pulse) {
  return fit_truncated(histogram(sample, pulse.tau / 100.0, pulse.window), pulse.tau);
}

CampaignResult run_trials(const CampaignConfig& config, unsigned threads) {
  config.validate();
  const std::vector<GridPoint> points = expand_grid(config);
  const bool truncated = config.mode == Mode::Truncated;
  const std::size_t per_point = truncated ? config.repeats : config.trials;
  const bool alternate = config.alternate_sign;

  std::vector<TrialOutcome> outcomes(points.size() * per_point);
  parallel_for(outcomes.size(), threads, [&](std::size_t unit) {
    const std::size_t g = unit / per_point;
    const std::size_t trial = unit % per_point;
    const GridPoint& point = points[g];

    SamplerConfig base;
    base.params = config.params;
    base.params.velocity = point.v_true;
    base.pulse = pulse_for(config, point.tau, point.n);
    base.quantization = config.quantization;
    base.seed = derive_seed(config.master_seed, g);
    const SamplerConfig pulse_cfg = pulse_config(base, trial, alternate);
    const double sign = (alternate && trial % 2 == 1) ? -1.0 : 1.0;

    const ArrivalSample sample = sample_pulse(pulse_cfg);
    TrialOutcome& out = outcomes[unit];
    out.n_detected = sample.n_detected();
    if (truncated) {
      const FitResult fit = fit_sample(sample, pulse_cfg.pulse);
      if (!fit.converged) return;
      const VelocityEstimate e = fit_velocity(fit, pulse_cfg.params, pulse_cfg.pulse);
      out.v_folded = sign * e.v_hat;
      out.std_error = e.std_error;
    } else {
      const VelocityEstimate e = mean_arrival_estimator(sample, pulse_cfg.params, pulse_cfg.pulse);
      out.v_folded = sign * e.v_hat;
      out.std_error = e.std_error;
    }
    out.ok = true;
  });

  CampaignResult result;
  result.mode = config.mode;
  const double k = config.params.k();
  for (std::size_t g = 0; g < points.size(); ++g) {
    const GridPoint& point = points[g];
    std::vector<double> v;
    double n_det_sum = 0.0;
    double phi_sum = 0.0;
    std::size_t phi_count = 0;
    std::optional<double> single_error;
    CampaignRow row;
    for (std::size_t t = 0; t < per_point; ++t) {
      const TrialOutcome& o = outcomes[g * per_point + t];
      n_det_sum += static_cast<double>(o.n_detected);
      if (o.n_detected > 0) {
        phi_sum += estimate_phi(o.n_detected, point.n);
        ++phi_count;
      }
      if (o.ok) {
        v.push_back(o.v_folded);
        single_error = o.std_error;
      } else {
        ++row.failed_fits;
      }
    }
    if (truncated) {
      result.total_fits += per_point;
      result.failed_fits += row.failed_fits;
    }

    row.tau_s = point.tau;
    row.v_pp_v = point.v_pp;
    row.n_input = point.n;
    row.tau_sqrt_n = point.tau * std::sqrt(static_cast<double>(point.n));
    row.phi_rad = phi_count ? phi_sum / static_cast<double>(phi_count) : 0.0;
    row.v_true_mps = point.v_true;
    row.trials_used = v.size();
    if (v.size() >= 2) {
      const RepeatStatistics stats = repeat_statistics(std::span<const double>(v));
      row.v_hat_mean_mps = stats.mean_v;
      row.v_hat_std_mps = stats.std_v;
    } else if (v.size() == 1) {
      row.v_hat_mean_mps = v.front();
      row.v_hat_std_mps = single_error.value_or(std::numeric_limits<double>::quiet_NaN());
    } else {
      row.v_hat_mean_mps = std::numeric_limits<double>::quiet_NaN();
      row.v_hat_std_mps = std::numeric_limits<double>::quiet_NaN();
    }
    row.f_d_mean_hz = doppler_shift(row.v_hat_mean_mps, config.params.wavelength);
    row.f_d_std_hz = doppler_shift(row.v_hat_std_mps, config.params.wavelength);
    row.crb_v_mps = crb_velocity(static_cast<double>(point.n), point.tau, k);
    row.efficiency_ratio = row.v_hat_std_mps / row.crb_v_mps;
    row.snr_predicted = snr(point.v_true, static_cast<double>(point.n), point.tau, k);
    row.n_detected_mean = n_det_sum / static_cast<double>(per_point);
    result.rows.push_back(row);
  }
  return result;
}

void require_mode(const CampaignConfig& config, Mode expected) {
  if (config.mode != expected) {
    throw ConfigError(fmt::format("campaign.mode: expected '{}', got '{}'", mode_name(expected),
                                  mode_name(config.mode)),
                      0, "campaign.mode");
  }
}

}  // namespace

double grid_velocity(const CampaignConfig& config, double tau, double value, bool from_drive) {
  if (!from_drive) return std::abs(value);
  PiezoDrive drive = config.drive.value_or(PiezoDrive{});
  drive.v_pp = value;
  if (!config.fixed_f_m) drive.f_m = 1.0 / (2.0 * config.period_factor * tau);
  return piezo_velocity(drive);
}

CampaignResult run_sweep(const CampaignConfig& config, unsigned threads) {
  require_mode(config, Mode::Sweep);
  return run_trials(config, threads);
}

CampaignResult run_efficiency(const CampaignConfig& config, unsigned threads) {
  require_mode(config, Mode::Efficiency);
  return run_trials(config, threads);
}

CampaignResult run_truncated(const CampaignConfig& config, unsigned threads) {
  require_mode(config, Mode::Truncated);
  return run_trials(config, threads);
}

CampaignResult run_campaign(const CampaignConfig& config, unsigned threads) {
  switch (config.mode) {
    case Mode::Sweep: return run_sweep(config, threads);
    case Mode::Efficiency: return run_efficiency(config, threads);
    case Mode::Truncated: return run_truncated(config, threads);
    case Mode::Single: break;
  }
  throw ConfigError("campaign.mode: single mode runs through run_single", 0, "campaign.mode");
}

SingleResult run_single(const CampaignConfig& config) {
  require_mode(config, Mode::Single);
  config.validate();

  SingleResult r;
  r.sampler.params = config.params;
  r.sampler.pulse = config.pulse;
  r.sampler.pulse.n_input = config.effective_n(config.pulse.n_input);
  r.sampler.quantization = config.quantization;
  r.sampler.seed = config.master_seed;
  r.sample = sample_pulse(r.sampler);

  const PulseSpec& pulse = r.sampler.pulse;
  if (pulse.full_gaussian()) {
    r.estimate = mean_arrival_estimator(r.sample, config.params, pulse);
  } else {
    const FitResult fit = fit_sample(r.sample, pulse);
    if (!fit.converged) {
      throw ConvergenceError(fmt::format("truncated fit did not converge in {} iterations", fit.iterations));
    }
    r.estimate = fit_velocity(fit, config.params, pulse);
  }

  const double n = static_cast<double>(pulse.n_input);
  const double k = config.params.k();
  CampaignRow& row = r.row;
  row.tau_s = pulse.tau;
  row.n_input = pulse.n_input;
  row.tau_sqrt_n = pulse.tau * std::sqrt(n);
  row.phi_rad = r.sample.n_detected() > 0 ? estimate_phi(r.sample.n_detected(), pulse.n_input) : 0.0;
  row.v_true_mps = config.params.velocity;
  row.v_hat_mean_mps = r.estimate.v_hat;
  row.v_hat_std_mps = r.estimate.std_error.value_or(std::numeric_limits<double>::quiet_NaN());
  row.f_d_mean_hz = r.estimate.f_d_hat;
  row.f_d_std_hz = doppler_shift(row.v_hat_std_mps, config.params.wavelength);
  row.crb_v_mps = crb_velocity(n, pulse.tau, k);
  row.efficiency_ratio = row.v_hat_std_mps / row.crb_v_mps;
  row.snr_predicted = snr(config.params.velocity, n, pulse.tau, k);
  row.n_detected_mean = static_cast<double>(r.sample.n_detected());
  row.trials_used = 1;
  return r;
}

}  // namespace weakvel
