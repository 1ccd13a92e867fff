#include "weakvel/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/core.h>
#include <fmt/ostream.h>

#include "weakvel/errors.hpp"
#include "weakvel/parallel.hpp"
#include "weakvel/rng.hpp"

namespace weakvel {

void SamplerConfig::validate() const {
  params.require_dark_port();
  pulse.validate();
  if (!(quantization >= 0.0) || !std::isfinite(quantization)) {
    throw DomainError(fmt::format("quantization must be >= 0, got {}", quantization));
  }
}

namespace {

// Nearest multiple of `step`, pulled one step toward zero if rounding left the window.
double quantize(double t, double step, double window) {
  double q = std::round(t / step) * step;
  if (std::abs(q) > window) q = std::trunc(t / step) * step;
  return q;
}

}  // namespace

ArrivalSample sample_pulse(const SamplerConfig& config) {
  config.validate();

  const double tau = config.pulse.tau;
  const double window = config.pulse.window;
  const bool truncated = !config.pulse.full_gaussian();
  const double phi = config.params.phi;
  const double kv = config.params.k() * config.params.velocity;

  Engine engine(config.seed);
  std::normal_distribution<double> normal(0.0, tau);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  ArrivalSample sample;
  sample.n_input = config.pulse.n_input;
  sample.seed = config.seed;
  // Expected acceptance is about sin²φ; reserve a little above that.
  const double expected = static_cast<double>(sample.n_input) * std::pow(std::sin(phi), 2);
  sample.times.reserve(static_cast<std::size_t>(expected + 6.0 * std::sqrt(expected) + 16.0));

  for (std::uint64_t i = 0; i < sample.n_input; ++i) {
    double t = normal(engine);
    if (truncated) {
      while (std::abs(t) > window) t = normal(engine);
    }
    const double s = std::sin(phi + kv * t);
    if (uniform(engine) < s * s) sample.times.push_back(t);
  }

  if (config.quantization > 0.0) {
    for (double& t : sample.times) t = quantize(t, config.quantization, window);
  }
  std::sort(sample.times.begin(), sample.times.end());
  return sample;
}

SamplerConfig pulse_config(const SamplerConfig& master, std::uint64_t index, bool alternate_sign) {
  SamplerConfig c = master;
  c.seed = derive_seed(master.seed, index);
  if (alternate_sign && (index % 2 == 1)) c.params.velocity = -c.params.velocity;
  return c;
}

std::vector<ArrivalSample> sample_pulse_train(const SamplerConfig& config, std::size_t n_pulses,
                                              bool alternate_sign, unsigned threads) {
  if (n_pulses == 0) throw DomainError("a pulse train needs at least one pulse");
  config.validate();
  std::vector<ArrivalSample> out(n_pulses);
  parallel_for(n_pulses, threads, [&](std::size_t i) {
    out[i] = sample_pulse(pulse_config(config, i, alternate_sign));
  });
  return out;
}

double Histogram::total() const noexcept {
  double sum = 0.0;
  for (double c : counts) sum += c;
  return sum;
}

Histogram histogram(const ArrivalSample& sample, double bin_width, double extent) {
  if (!(bin_width > 0.0)) throw DomainError("histogram bin width must be positive");
  if (!(extent > 0.0) || !std::isfinite(extent)) {
    throw DomainError("histogram extent must be positive and finite");
  }
  const auto n_bins = static_cast<std::size_t>(std::max(1.0, std::round(2.0 * extent / bin_width)));
  Histogram h;
  h.bin_width = 2.0 * extent / static_cast<double>(n_bins);
  h.centers.resize(n_bins);
  h.counts.assign(n_bins, 0.0);
  for (std::size_t i = 0; i < n_bins; ++i) {
    h.centers[i] = -extent + (static_cast<double>(i) + 0.5) * h.bin_width;
  }
  for (double t : sample.times) {
    if (t < -extent || t > extent) continue;
    auto bin = static_cast<std::size_t>((t + extent) / h.bin_width);
    h.counts[std::min(bin, n_bins - 1)] += 1.0;
  }
  return h;
}

void write_arrivals_csv(std::ostream& out, const ArrivalSample& sample, const SamplerConfig& config) {
  fmt::print(out, "# weakvel arrivals seed={} n_input={} n_detected={}\n", sample.seed,
             sample.n_input, sample.n_detected());
  fmt::print(out,
             "# wavelength_m={:.17e} phi_rad={:.17e} velocity_mps={:.17e} tau_s={:.17e} "
             "window_s={:.17e} quantization_s={:.17e}\n",
             config.params.wavelength, config.params.phi, config.params.velocity,
             config.pulse.tau, config.pulse.window, config.quantization);
  out << "arrival_time_s\n";
  for (double t : sample.times) fmt::print(out, "{:.17e}\n", t);
  if (!out) throw IoError("failed writing arrival-time CSV");
}

ArrivalSample read_arrivals_csv(std::istream& in) {
  ArrivalSample sample;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream words(line.substr(1));
      std::string word;
      while (words >> word) {
        if (word.starts_with("seed=")) sample.seed = std::stoull(word.substr(5));
        if (word.starts_with("n_input=")) sample.n_input = std::stoull(word.substr(8));
      }
      continue;
    }
    if (line == "arrival_time_s") continue;
    std::size_t used = 0;
    double t = 0.0;
    try {
      t = std::stod(line, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != line.size()) {
      throw ConfigError(fmt::format("line {}: '{}' is not an arrival time", line_no, line), line_no);
    }
    sample.times.push_back(t);
  }
  return sample;
}

void write_histogram_csv(std::ostream& out, const Histogram& hist) {
  out << "bin_center_s,count\n";
  for (std::size_t i = 0; i < hist.centers.size(); ++i) {
    fmt::print(out, "{:.17e},{}\n", hist.centers[i], hist.counts[i]);
  }
  if (!out) throw IoError("failed writing histogram CSV");
}

}  // namespace weakvel
