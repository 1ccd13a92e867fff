#include "weakvel/units.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>

#include <fmt/core.h>

#include "weakvel/errors.hpp"

namespace weakvel {

namespace {

struct UnitEntry {
  std::string_view symbol;
  Dimension dim;
  double scale;
};

constexpr std::array kUnits{
    UnitEntry{"rad", Dimension::Angle, 1.0},
    UnitEntry{"mrad", Dimension::Angle, 1e-3},

    UnitEntry{"s", Dimension::Time, 1.0},
    UnitEntry{"ms", Dimension::Time, 1e-3},
    UnitEntry{"us", Dimension::Time, 1e-6},
    UnitEntry{"ns", Dimension::Time, 1e-9},
    UnitEntry{"ps", Dimension::Time, 1e-12},

    UnitEntry{"m", Dimension::Length, 1.0},
    UnitEntry{"mm", Dimension::Length, 1e-3},
    UnitEntry{"um", Dimension::Length, 1e-6},
    UnitEntry{"nm", Dimension::Length, 1e-9},
    UnitEntry{"pm", Dimension::Length, 1e-12},
    UnitEntry{"fm", Dimension::Length, 1e-15},

    UnitEntry{"m/s", Dimension::Velocity, 1.0},
    UnitEntry{"mm/s", Dimension::Velocity, 1e-3},
    UnitEntry{"um/s", Dimension::Velocity, 1e-6},
    UnitEntry{"nm/s", Dimension::Velocity, 1e-9},
    UnitEntry{"pm/s", Dimension::Velocity, 1e-12},
    UnitEntry{"fm/s", Dimension::Velocity, 1e-15},

    UnitEntry{"V", Dimension::Voltage, 1.0},
    UnitEntry{"mV", Dimension::Voltage, 1e-3},
    UnitEntry{"uV", Dimension::Voltage, 1e-6},

    UnitEntry{"Hz", Dimension::Frequency, 1.0},
    UnitEntry{"kHz", Dimension::Frequency, 1e3},
    UnitEntry{"mHz", Dimension::Frequency, 1e-3},
    UnitEntry{"uHz", Dimension::Frequency, 1e-6},

    UnitEntry{"m/V", Dimension::Response, 1.0},
    UnitEntry{"nm/V", Dimension::Response, 1e-9},
    UnitEntry{"pm/V", Dimension::Response, 1e-12},
    UnitEntry{"nm/mV", Dimension::Response, 1e-6},
    UnitEntry{"pm/mV", Dimension::Response, 1e-9},
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string_view dimension_name(Dimension dim) {
  switch (dim) {
    case Dimension::Dimensionless: return "dimensionless";
    case Dimension::Angle: return "angle";
    case Dimension::Time: return "time";
    case Dimension::Length: return "length";
    case Dimension::Velocity: return "velocity";
    case Dimension::Voltage: return "voltage";
    case Dimension::Frequency: return "frequency";
    case Dimension::Response: return "piezo response";
  }
  return "unknown";
}

double parse_quantity(std::string_view text, Dimension dim) {
  const std::string_view s = trim(text);
  if (s.empty()) throw ConfigError("empty value");

  double value = 0.0;
  std::string_view rest;
  if (s.starts_with("inf") || s.starts_with("+inf")) {
    value = std::numeric_limits<double>::infinity();
    rest = s.substr(s.find('f') + 1);
  } else {
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{}) {
      throw ConfigError(fmt::format("'{}' is not a number", s));
    }
    rest = std::string_view(ptr, static_cast<std::size_t>(last - ptr));
  }

  const std::string_view unit = trim(rest);
  if (unit.empty()) return value;

  for (const auto& entry : kUnits) {
    if (entry.symbol == unit) {
      if (entry.dim != dim) {
        throw ConfigError(fmt::format("unit '{}' is not a {} unit", unit, dimension_name(dim)));
      }
      return value * entry.scale;
    }
  }
  throw ConfigError(fmt::format("unknown unit '{}'", unit));
}

}  // namespace weakvel
