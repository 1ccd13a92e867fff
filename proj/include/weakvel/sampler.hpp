#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "weakvel/optics.hpp"

namespace weakvel {

struct SamplerConfig {
  InterferometerParams params;
  PulseSpec pulse;
  double quantization = 0.0;  ///< detector time resolution in seconds, 0 disables
  std::uint64_t seed = 0;

  void validate() const;
};

/// Detected photons of one pulse. Times are in seconds relative to the pulse
/// center and sorted ascending.
struct ArrivalSample {
  std::vector<double> times;
  std::uint64_t n_input = 0;
  std::uint64_t seed = 0;

  std::uint64_t n_detected() const noexcept { return times.size(); }
};

/// Draws `pulse.n_input` photons from the Gaussian envelope (redrawing any
/// outside the window) and keeps each with probability sin²(φ + kvt). The
/// kept times are i.i.d. from the normalized exact dark-port intensity.
/// Throws DomainError unless 0 < φ < π/2.
ArrivalSample sample_pulse(const SamplerConfig& config);

/// Configuration of pulse `index` in a train: seed derived from the master
/// seed and the index, velocity sign flipped on odd pulses when `alternate_sign`.
SamplerConfig pulse_config(const SamplerConfig& master, std::uint64_t index, bool alternate_sign);

/// Independent pulses, pulse i drawn from pulse_config(config, i, alternate_sign).
/// The result does not depend on `threads`.
std::vector<ArrivalSample> sample_pulse_train(const SamplerConfig& config, std::size_t n_pulses,
                                              bool alternate_sign, unsigned threads = 1);

/// Binned counts over [−extent, extent]. The bin count is 2·extent/bin_width
/// rounded to the nearest integer (at least one), and the width is then
/// adjusted so that the bins tile the interval exactly.
struct Histogram {
  std::vector<double> centers;
  std::vector<double> counts;
  double bin_width = 0.0;

  double total() const noexcept;
};

Histogram histogram(const ArrivalSample& sample, double bin_width, double extent);

/// One arrival time per line in %.17e, preceded by '#' lines describing the
/// configuration.
void write_arrivals_csv(std::ostream& out, const ArrivalSample& sample, const SamplerConfig& config);

/// Inverse of write_arrivals_csv. Header comments are skipped; n_input and
/// seed are recovered from them when present.
ArrivalSample read_arrivals_csv(std::istream& in);

/// Columns bin_center_s,count.
void write_histogram_csv(std::ostream& out, const Histogram& hist);

}  // namespace weakvel
