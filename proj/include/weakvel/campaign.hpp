#pragma once

#include <cstdint>
#include <vector>

#include "weakvel/config.hpp"
#include "weakvel/estimators.hpp"
#include "weakvel/sampler.hpp"

namespace weakvel {

/// Aggregate of all trials at one grid point. Velocities are speeds: with
/// sign alternation each estimate is folded by its pulse's sign first.
/// v_pp_v is 0 when the grid lists velocities directly.
struct CampaignRow {
  double tau_s = 0.0;
  double v_pp_v = 0.0;
  std::uint64_t n_input = 0;
  double tau_sqrt_n = 0.0;
  double phi_rad = 0.0;  ///< mean of arcsin √(N_φ/N) over trials
  double v_true_mps = 0.0;
  double v_hat_mean_mps = 0.0;
  double v_hat_std_mps = 0.0;
  double f_d_mean_hz = 0.0;
  double f_d_std_hz = 0.0;
  double crb_v_mps = 0.0;
  double efficiency_ratio = 0.0;
  double snr_predicted = 0.0;
  double n_detected_mean = 0.0;
  std::uint64_t trials_used = 0;
  std::uint64_t failed_fits = 0;

  bool operator==(const CampaignRow&) const = default;
};

struct CampaignResult {
  Mode mode = Mode::Single;
  std::vector<CampaignRow> rows;
  std::uint64_t total_fits = 0;
  std::uint64_t failed_fits = 0;

  double failure_fraction() const noexcept {
    return total_fits == 0 ? 0.0 : static_cast<double>(failed_fits) / static_cast<double>(total_fits);
  }
};

struct SingleResult {
  CampaignRow row;
  VelocityEstimate estimate;
  SamplerConfig sampler;
  ArrivalSample sample;
};

/// Mirror speed at one grid point (always non-negative).
double grid_velocity(const CampaignConfig& config, double tau, double v_pp_or_velocity, bool from_drive);

CampaignResult run_sweep(const CampaignConfig& config, unsigned threads = 1);
CampaignResult run_efficiency(const CampaignConfig& config, unsigned threads = 1);
CampaignResult run_truncated(const CampaignConfig& config, unsigned threads = 1);
SingleResult run_single(const CampaignConfig& config);

/// Dispatches on config.mode for the three multi-trial modes.
CampaignResult run_campaign(const CampaignConfig& config, unsigned threads = 1);

}  // namespace weakvel
