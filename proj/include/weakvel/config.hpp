#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "weakvel/optics.hpp"

namespace weakvel {

enum class Mode { Single, Sweep, Efficiency, Truncated };

std::string_view mode_name(Mode mode) noexcept;
std::optional<Mode> mode_from_name(std::string_view name) noexcept;

/// Campaign grid. Exactly one of `v_pp` and `velocity` drives the mirror;
/// every combination of tau × (v_pp | velocity) × n_input is one grid point.
struct Grid {
  std::vector<double> tau;            ///< s
  std::vector<double> v_pp;           ///< V, converted with the piezo drive
  std::vector<double> velocity;       ///< m/s, used as given
  std::vector<std::uint64_t> n_input; ///< photons offered per pulse
};

struct CampaignConfig {
  Mode mode = Mode::Single;
  InterferometerParams params;
  PulseSpec pulse;
  /// Piezo drive. Only alpha is used by campaigns: the drive frequency
  /// follows each grid τ as 2·f_m = 1/(period_factor·τ) unless `fixed_f_m`.
  std::optional<PiezoDrive> drive;
  double period_factor = 6.0;
  bool fixed_f_m = false;
  Grid grid;
  double quantization = 0.0;  ///< s
  std::size_t trials = 200;
  std::size_t repeats = 13;
  std::uint64_t master_seed = 0;
  double detection_efficiency = 1.0;
  bool alternate_sign = true;
  double max_failure_fraction = 0.5;
  std::string output_path;

  /// Throws ConfigError naming the offending field.
  void validate() const;

  /// Photons offered after the detection-efficiency scaling.
  std::uint64_t effective_n(std::uint64_t n_input) const;
};

/// Parses the INI-style campaign document:
///
///     mode = efficiency          # top-level keys belong to [campaign]
///     [optics]   wavelength, phi, velocity
///     [pulse]    tau, window ("inf" | "half_tau" | time), n_input, i0, quantization
///     [drive]    alpha, v_pp, f_m, period_factor
///     [grid]     tau, v_pp, velocity, n_input  (comma-separated lists)
///     [campaign] mode, master_seed, trials, repeats, detection_efficiency,
///                alternate_sign, max_failure_fraction, output
///
/// Values accept units (ms, nm, pm/s, mV, pm/mV, ...) and are stored in SI.
/// Mode-dependent defaults are filled in, then validate() runs. Unknown
/// sections or keys, malformed values and duplicates throw ConfigError with
/// the line number. `default_mode` stands in for a missing campaign.mode key.
CampaignConfig parse_config(std::string_view text, std::optional<Mode> default_mode = std::nullopt);

/// Canonical one-key-per-line description of a validated config, stable
/// across runs. Used for the header hash of result files.
std::string describe(const CampaignConfig& config);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

}  // namespace weakvel
