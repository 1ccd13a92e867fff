#pragma once

#include <string_view>

namespace weakvel {

/// Physical dimension expected of a quantity parsed from text.
enum class Dimension {
  Dimensionless,
  Angle,      // rad, mrad
  Time,       // s, ms, us, ns, ps
  Length,     // m, mm, um, nm, pm, fm
  Velocity,   // m/s ... fm/s
  Voltage,    // V, mV, uV
  Frequency,  // Hz, mHz, uHz, kHz
  Response,   // piezo response: m/V, nm/V, pm/mV
};

/// Parses "16.7 ms", "780nm", "27 pm/mV", "1e6" and returns the value in SI
/// units. A bare number is taken to be SI already. "inf" is accepted.
/// Throws ConfigError on malformed text or a unit of the wrong dimension.
double parse_quantity(std::string_view text, Dimension dim);

std::string_view dimension_name(Dimension dim);

}  // namespace weakvel
