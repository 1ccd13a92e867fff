#include "weakvel/config.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <fmt/core.h>

#include "weakvel/errors.hpp"
#include "weakvel/units.hpp"

namespace weakvel {

std::string_view mode_name(Mode mode) noexcept {
  switch (mode) {
    case Mode::Single: return "single";
    case Mode::Sweep: return "sweep";
    case Mode::Efficiency: return "efficiency";
    case Mode::Truncated: return "truncated";
  }
  return "unknown";
}

std::optional<Mode> mode_from_name(std::string_view name) noexcept {
  for (Mode m : {Mode::Single, Mode::Sweep, Mode::Efficiency, Mode::Truncated}) {
    if (mode_name(m) == name) return m;
  }
  return std::nullopt;
}

std::uint64_t CampaignConfig::effective_n(std::uint64_t n_input) const {
  const auto n = static_cast<std::uint64_t>(std::llround(static_cast<double>(n_input) * detection_efficiency));
  return std::max<std::uint64_t>(n, 1);
}

void CampaignConfig::validate() const {
  auto fail = [](std::string_view field, const std::string& msg) {
    throw ConfigError(fmt::format("{}: {}", field, msg), 0, std::string(field));
  };

  if (!(params.wavelength > 0.0) || !std::isfinite(params.wavelength)) {
    fail("optics.wavelength", "must be positive");
  }
  if (!(params.phi > 0.0 && params.phi < 0.5 * std::numbers::pi)) {
    fail("optics.phi", "must lie in (0, pi/2)");
  }
  if (!std::isfinite(params.velocity)) fail("optics.velocity", "must be finite");
  if (!(pulse.tau > 0.0) || !std::isfinite(pulse.tau)) fail("pulse.tau", "must be positive");
  if (!(pulse.window > 0.0)) fail("pulse.window", "must be positive");
  if (pulse.n_input == 0) fail("pulse.n_input", "must be at least 1");
  if (!(pulse.i0 > 0.0)) fail("pulse.i0", "must be positive");
  if (!(quantization >= 0.0) || !std::isfinite(quantization)) fail("pulse.quantization", "must be >= 0");
  if (!(detection_efficiency > 0.0 && detection_efficiency <= 1.0)) {
    fail("campaign.detection_efficiency", "must lie in (0, 1]");
  }
  if (!(max_failure_fraction >= 0.0 && max_failure_fraction <= 1.0)) {
    fail("campaign.max_failure_fraction", "must lie in [0, 1]");
  }
  if (trials < 1) fail("campaign.trials", "must be at least 1");
  if (drive) {
    if (!(drive->alpha > 0.0)) fail("drive.alpha", "must be positive");
    if (!(drive->v_pp >= 0.0)) fail("drive.v_pp", "must be >= 0");
    if (fixed_f_m && !(drive->f_m > 0.0)) fail("drive.f_m", "must be positive");
  }
  if (!(period_factor > 0.0)) fail("drive.period_factor", "must be positive");

  if (mode == Mode::Single) return;

  if (grid.tau.empty()) fail("grid.tau", "must list at least one pulse width");
  for (double t : grid.tau) {
    if (!(t > 0.0) || !std::isfinite(t)) fail("grid.tau", fmt::format("pulse width {} is not positive", t));
  }
  if (grid.n_input.empty()) fail("grid.n_input", "must list at least one photon count");
  for (auto n : grid.n_input) {
    if (n == 0) fail("grid.n_input", "photon counts must be at least 1");
  }
  if (!grid.v_pp.empty() && !grid.velocity.empty()) {
    fail("grid", "give either v_pp or velocity, not both");
  }
  if (grid.v_pp.empty() && grid.velocity.empty()) fail("grid", "v_pp or velocity list required");
  if (!grid.v_pp.empty() && !drive) fail("drive", "a v_pp grid needs a piezo drive");
  for (double v : grid.v_pp) {
    if (!(v >= 0.0) || !std::isfinite(v)) fail("grid.v_pp", "voltages must be >= 0");
  }
  for (double v : grid.velocity) {
    if (!std::isfinite(v)) fail("grid.velocity", "velocities must be finite");
  }

  if (mode == Mode::Truncated) {
    if (repeats < 2) fail("campaign.repeats", "truncated mode needs at least 2 repeats");
  } else if (!pulse.full_gaussian()) {
    fail("pulse.window", fmt::format("{} mode uses the full Gaussian pulse; window must be inf", mode_name(mode)));
  }
}

namespace {

struct Entry {
  std::string value;
  int line;
};

using Document = std::map<std::string, std::map<std::string, Entry>>;

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"optics", {"wavelength", "phi", "velocity"}},
      {"pulse", {"tau", "window", "n_input", "i0", "quantization"}},
      {"drive", {"alpha", "v_pp", "f_m", "period_factor"}},
      {"grid", {"tau", "v_pp", "velocity", "n_input"}},
      {"campaign",
       {"mode", "master_seed", "trials", "repeats", "detection_efficiency", "alternate_sign",
        "max_failure_fraction", "output"}},
  };
  return s;
}

Document tokenize(std::string_view text) {
  Document doc;
  std::string section = "campaign";
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(fmt::format("line {}: unterminated section header", line_no), line_no);
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!schema().contains(section)) {
        throw ConfigError(fmt::format("line {}: unknown section [{}]", line_no, section), line_no, section);
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(fmt::format("line {}: expected 'key = value'", line_no), line_no);
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    const std::string field = section + "." + key;
    if (key.empty()) throw ConfigError(fmt::format("line {}: missing key", line_no), line_no);
    if (!schema().at(section).contains(key)) {
      throw ConfigError(fmt::format("line {}: unknown key '{}'", line_no, field), line_no, field);
    }
    if (value.empty()) throw ConfigError(fmt::format("line {}: '{}' has no value", line_no, field), line_no, field);
    auto [it, inserted] = doc[section].emplace(key, Entry{value, line_no});
    if (!inserted) {
      throw ConfigError(fmt::format("line {}: duplicate key '{}' (first set on line {})", line_no, field,
                                    it->second.line),
                        line_no, field);
    }
  }
  return doc;
}

class Reader {
 public:
  explicit Reader(const Document& doc) : doc_(doc) {}

  const Entry* find(const std::string& section, const std::string& key) const {
    auto s = doc_.find(section);
    if (s == doc_.end()) return nullptr;
    auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }

  bool has_section(const std::string& section) const { return doc_.contains(section); }

  template <class Fn>
  auto wrap(const Entry& e, const std::string& field, Fn&& fn) const {
    try {
      return fn(e.value);
    } catch (const ConfigError& err) {
      throw ConfigError(fmt::format("line {}: {}: {}", e.line, field, err.what()), e.line, field);
    }
  }

  std::optional<double> quantity(const std::string& section, const std::string& key, Dimension dim) const {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    return wrap(*e, section + "." + key, [&](const std::string& v) { return parse_quantity(v, dim); });
  }

  std::optional<std::vector<double>> list(const std::string& section, const std::string& key, Dimension dim) const {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    return wrap(*e, section + "." + key, [&](const std::string& v) {
      std::vector<double> out;
      std::string item;
      std::istringstream items(v);
      while (std::getline(items, item, ',')) out.push_back(parse_quantity(item, dim));
      return out;
    });
  }

  std::optional<std::uint64_t> count(const std::string& section, const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    return wrap(*e, section + "." + key, [](const std::string& v) { return to_count(v); });
  }

  std::optional<std::vector<std::uint64_t>> count_list(const std::string& section, const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    return wrap(*e, section + "." + key, [](const std::string& v) {
      std::vector<std::uint64_t> out;
      std::string item;
      std::istringstream items(v);
      while (std::getline(items, item, ',')) out.push_back(to_count(item));
      return out;
    });
  }

  std::optional<std::uint64_t> seed(const std::string& section, const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    return wrap(*e, section + "." + key, [](const std::string& v) {
      std::size_t used = 0;
      std::uint64_t s = 0;
      try {
        if (v.front() == '-') throw std::invalid_argument("negative");
        s = std::stoull(v, &used, 0);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != v.size()) throw ConfigError(fmt::format("'{}' is not an unsigned 64-bit integer", v));
      return s;
    });
  }

  std::optional<bool> boolean(const std::string& section, const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    return wrap(*e, section + "." + key, [](const std::string& v) {
      if (v == "true" || v == "yes" || v == "1") return true;
      if (v == "false" || v == "no" || v == "0") return false;
      throw ConfigError(fmt::format("'{}' is not a boolean", v));
    });
  }

 private:
  static std::uint64_t to_count(const std::string& text) {
    const double v = parse_quantity(text, Dimension::Dimensionless);
    if (!(v >= 0.0) || v != std::floor(v) || v > 1.8e19) {
      throw ConfigError(fmt::format("'{}' is not a non-negative integer", trim(text)));
    }
    return static_cast<std::uint64_t>(v);
  }

  const Document& doc_;
};

}  // namespace

CampaignConfig parse_config(std::string_view text, std::optional<Mode> default_mode) {
  const Document doc = tokenize(text);
  const Reader r(doc);
  CampaignConfig c;

  const Entry* mode_entry = r.find("campaign", "mode");
  std::optional<Mode> mode = default_mode;
  if (mode_entry) {
    mode = mode_from_name(mode_entry->value);
  } else if (!mode) {
    throw ConfigError("campaign.mode: required (single, sweep, efficiency, truncated)", 0, "campaign.mode");
  }
  if (!mode) {
    throw ConfigError(fmt::format("line {}: campaign.mode: unknown mode '{}'", mode_entry->line, mode_entry->value),
                      mode_entry->line, "campaign.mode");
  }
  c.mode = *mode;

  if (auto v = r.quantity("optics", "wavelength", Dimension::Length)) c.params.wavelength = *v;
  if (auto v = r.quantity("optics", "phi", Dimension::Angle)) c.params.phi = *v;
  if (auto v = r.quantity("optics", "velocity", Dimension::Velocity)) c.params.velocity = *v;

  if (auto v = r.quantity("pulse", "tau", Dimension::Time)) c.pulse.tau = *v;
  if (auto n = r.count("pulse", "n_input")) c.pulse.n_input = *n;
  if (auto v = r.quantity("pulse", "i0", Dimension::Dimensionless)) c.pulse.i0 = *v;
  if (auto v = r.quantity("pulse", "quantization", Dimension::Time)) c.quantization = *v;
  bool half_tau_window = c.mode == Mode::Truncated;
  if (const Entry* e = r.find("pulse", "window")) {
    if (e->value == "half_tau") {
      half_tau_window = true;
    } else {
      half_tau_window = false;
      c.pulse.window = r.quantity("pulse", "window", Dimension::Time).value();
      if (c.mode == Mode::Truncated) {
        throw ConfigError(fmt::format("line {}: pulse.window: truncated mode always cuts at half_tau", e->line),
                          e->line, "pulse.window");
      }
    }
  }
  if (half_tau_window) c.pulse.window = 0.5 * c.pulse.tau;

  const bool truncated = c.mode == Mode::Truncated;
  c.period_factor = truncated ? 1.0 : 6.0;
  if (r.has_section("drive") || c.mode != Mode::Single) {
    PiezoDrive d;
    if (auto v = r.quantity("drive", "alpha", Dimension::Response)) d.alpha = *v;
    if (auto v = r.quantity("drive", "v_pp", Dimension::Voltage)) d.v_pp = *v;
    if (auto v = r.quantity("drive", "f_m", Dimension::Frequency)) {
      d.f_m = *v;
      c.fixed_f_m = true;
    }
    if (auto v = r.quantity("drive", "period_factor", Dimension::Dimensionless)) c.period_factor = *v;
    c.drive = d;
  }

  if (auto v = r.list("grid", "tau", Dimension::Time)) {
    c.grid.tau = *v;
  } else if (c.mode == Mode::Truncated) {
    c.grid.tau = {50.0};
  } else if (c.mode != Mode::Single) {
    c.grid.tau = {1.67e-3, 4.17e-3, 16.7e-3, 417e-3, 833e-3};
  }
  auto velocity = r.list("grid", "velocity", Dimension::Velocity);
  auto v_pp = r.list("grid", "v_pp", Dimension::Voltage);
  if (velocity) c.grid.velocity = *velocity;
  if (v_pp) {
    c.grid.v_pp = *v_pp;
  } else if (!velocity && c.mode != Mode::Single) {
    c.grid.v_pp = truncated ? std::vector<double>{2e-3, 1e-3, 0.5e-3}
                            : std::vector<double>{105e-3, 52.5e-3, 26.25e-3, 10.5e-3};
  }
  if (auto n = r.count_list("grid", "n_input")) {
    c.grid.n_input = *n;
  } else {
    c.grid.n_input = {c.pulse.n_input};
  }

  c.alternate_sign = c.mode != Mode::Efficiency;
  if (auto s = r.seed("campaign", "master_seed")) c.master_seed = *s;
  if (auto n = r.count("campaign", "trials")) c.trials = *n;
  if (auto n = r.count("campaign", "repeats")) c.repeats = *n;
  if (auto v = r.quantity("campaign", "detection_efficiency", Dimension::Dimensionless)) c.detection_efficiency = *v;
  if (auto b = r.boolean("campaign", "alternate_sign")) c.alternate_sign = *b;
  if (auto v = r.quantity("campaign", "max_failure_fraction", Dimension::Dimensionless)) c.max_failure_fraction = *v;
  if (const Entry* e = r.find("campaign", "output")) c.output_path = e->value;

  c.validate();
  return c;
}

namespace {

template <class T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    if constexpr (std::is_floating_point_v<T>) {
      out += fmt::format("{:.17e}", values[i]);
    } else {
      out += fmt::format("{}", values[i]);
    }
  }
  return out;
}

}  // namespace

std::string describe(const CampaignConfig& c) {
  std::string s;
  s += fmt::format("mode={}\n", mode_name(c.mode));
  s += fmt::format("wavelength={:.17e}\nphi={:.17e}\nvelocity={:.17e}\n", c.params.wavelength, c.params.phi,
                   c.params.velocity);
  s += fmt::format("tau={:.17e}\nwindow={:.17e}\nn_input={}\ni0={:.17e}\nquantization={:.17e}\n", c.pulse.tau,
                   c.pulse.window, c.pulse.n_input, c.pulse.i0, c.quantization);
  if (c.drive) {
    s += fmt::format("alpha={:.17e}\nv_pp={:.17e}\nf_m={:.17e}\nfixed_f_m={}\n", c.drive->alpha, c.drive->v_pp,
                     c.drive->f_m, c.fixed_f_m);
  }
  s += fmt::format("period_factor={:.17e}\n", c.period_factor);
  s += fmt::format("grid.tau={}\ngrid.v_pp={}\ngrid.velocity={}\ngrid.n_input={}\n", join(c.grid.tau),
                   join(c.grid.v_pp), join(c.grid.velocity), join(c.grid.n_input));
  s += fmt::format("trials={}\nrepeats={}\nmaster_seed={}\ndetection_efficiency={:.17e}\n", c.trials, c.repeats,
                   c.master_seed, c.detection_efficiency);
  s += fmt::format("alternate_sign={}\nmax_failure_fraction={:.17e}\n", c.alternate_sign, c.max_failure_fraction);
  return s;
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace weakvel
