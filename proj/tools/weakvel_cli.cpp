// Command-line front end: `weakvel <crb|single|sweep|efficiency|truncated> [options]`.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "weakvel/campaign.hpp"
#include "weakvel/config.hpp"
#include "weakvel/csv.hpp"
#include "weakvel/errors.hpp"
#include "weakvel/information.hpp"
#include "weakvel/units.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitIo = 3;
constexpr int kExitNonConvergence = 4;

struct RunOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
};

struct CrbOptions {
  std::string lambda = "780 nm";
  std::string tau;
  double n = 0.0;
  std::string phi = "0.31";
  std::string velocity = "0";
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw weakvel::IoError(fmt::format("cannot read config '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw weakvel::IoError(fmt::format("cannot write '{}'", path));
  return out;
}

weakvel::CampaignConfig load(const RunOptions& opts, weakvel::Mode mode) {
  const std::string text = opts.config_path.empty() ? std::string() : read_file(opts.config_path);
  weakvel::CampaignConfig config = weakvel::parse_config(text, mode);
  if (config.mode != mode) {
    throw weakvel::ConfigError(fmt::format("campaign.mode: config is '{}' but the subcommand is '{}'",
                                           weakvel::mode_name(config.mode), weakvel::mode_name(mode)),
                               0, "campaign.mode");
  }
  if (opts.seed) config.master_seed = *opts.seed;
  if (!opts.out.empty()) config.output_path = opts.out;
  return config;
}

int run_crb(const CrbOptions& o) {
  using weakvel::Dimension;
  const double lambda = weakvel::parse_quantity(o.lambda, Dimension::Length);
  const double tau = weakvel::parse_quantity(o.tau, Dimension::Time);
  const double phi = weakvel::parse_quantity(o.phi, Dimension::Angle);
  const double v = weakvel::parse_quantity(o.velocity, Dimension::Velocity);
  if (!(lambda > 0.0)) throw weakvel::ConfigError("--lambda must be positive");
  if (!(tau > 0.0)) throw weakvel::ConfigError("--tau must be positive");
  weakvel::write_bound_report_csv(std::cout, weakvel::bound_report(o.n, phi, tau, lambda, v));
  return kExitOk;
}

int run_single(const RunOptions& opts) {
  const weakvel::CampaignConfig config = load(opts, weakvel::Mode::Single);
  const weakvel::SingleResult r = weakvel::run_single(config);
  const std::span<const weakvel::CampaignRow> rows(&r.row, 1);
  if (config.output_path.empty()) {
    weakvel::write_campaign_csv(std::cout, config, rows);
    return kExitOk;
  }
  {
    auto out = open_output(config.output_path);
    weakvel::write_campaign_csv(out, config, rows);
  }
  {
    auto out = open_output(config.output_path + ".arrivals.csv");
    weakvel::write_arrivals_csv(out, r.sample, r.sampler);
  }
  weakvel::write_estimates_csv(std::cout, std::span(&r.estimate, 1));
  return kExitOk;
}

int run_multi(const RunOptions& opts, weakvel::Mode mode) {
  const weakvel::CampaignConfig config = load(opts, mode);
  const weakvel::CampaignResult result = weakvel::run_campaign(config, opts.threads);
  if (config.output_path.empty()) {
    weakvel::write_campaign_csv(std::cout, config, result.rows);
  } else {
    auto out = open_output(config.output_path);
    weakvel::write_campaign_csv(out, config, result.rows);
  }
  if (result.failed_fits > 0) {
    fmt::print(stderr, "warning: {} of {} fits did not converge\n", result.failed_fits, result.total_fits);
  }
  if (result.failure_fraction() > config.max_failure_fraction) {
    fmt::print(stderr, "error: fit failure fraction {:.3f} exceeds {:.3f}\n", result.failure_fraction(),
               config.max_failure_fraction);
    return kExitNonConvergence;
  }
  return kExitOk;
}

void add_run_options(CLI::App* sub, RunOptions& opts) {
  sub->add_option("--config", opts.config_path, "Campaign configuration file");
  sub->add_option("--seed", opts.seed, "Master seed (overrides the config)");
  sub->add_option("--out", opts.out, "Output CSV path (default: config output, else stdout)");
  sub->add_option("--threads", opts.threads, "Worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weak-value velocimetry: photon Monte Carlo, velocity estimation and Cramer-Rao bounds"};
  app.require_subcommand(1);

  CrbOptions crb_opts;
  auto* crb = app.add_subcommand("crb", "Print Fisher information, velocity bound and SNR");
  crb->add_option("--lambda", crb_opts.lambda, "Wavelength, e.g. '780 nm'");
  crb->add_option("--tau", crb_opts.tau, "Pulse width, e.g. '833 ms'")->required();
  crb->add_option("--n", crb_opts.n, "Photons sent into the interferometer")->required()->check(CLI::PositiveNumber);
  crb->add_option("--phi", crb_opts.phi, "Post-selection angle in rad");
  crb->add_option("--velocity", crb_opts.velocity, "Mirror velocity for the SNR, e.g. '60 pm/s'");

  RunOptions run_opts;
  auto* single = app.add_subcommand("single", "Sample and estimate one pulse");
  auto* sweep = app.add_subcommand("sweep", "Velocity vs pulse width for several drive voltages");
  auto* efficiency = app.add_subcommand("efficiency", "Estimator scatter against the Cramer-Rao bound");
  auto* truncated = app.add_subcommand("truncated", "Repeated fits of truncated pulses");
  for (auto* sub : {single, sweep, efficiency, truncated}) add_run_options(sub, run_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*crb) return run_crb(crb_opts);
    if (*single) return run_single(run_opts);
    if (*sweep) return run_multi(run_opts, weakvel::Mode::Sweep);
    if (*efficiency) return run_multi(run_opts, weakvel::Mode::Efficiency);
    if (*truncated) return run_multi(run_opts, weakvel::Mode::Truncated);
  } catch (const weakvel::IoError& e) {
    fmt::print(stderr, "I/O error: {}\n", e.what());
    return kExitIo;
  } catch (const weakvel::ConvergenceError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitNonConvergence;
  } catch (const weakvel::Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitInvalid;
  }
  return kExitInvalid;
}
