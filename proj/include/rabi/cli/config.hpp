#pragma once

#include <cstddef>
#include <istream>
#include <stdexcept>
#include <string>

#include "rabi/sweep.hpp"

// Sweep configuration files:
//
//   # degenerate qubit
//   omega0   = 0
//   omega    = 0.45
//   g2       = grid(0, 0.45, 201)
//   subspace = q14+
//   cutoff   = 1024
//
// Keys: omega0, omega, g2 | g2_relative (multiples of g_c = omega/2),
// subspace (q14+, q14-, q34+, q34-, full), cutoff, eigenpairs,
// tail_fraction, tolerance. Values are comma-separated lists whose items are
// numbers or grid(start, stop, count).

namespace rabi::cli {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  /// 1-based line of the offending entry, 0 when not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Parses and validates a configuration. Throws ConfigError.
SweepConfig parse_sweep_config(std::istream& in);
SweepConfig parse_sweep_config_text(const std::string& text);
SweepConfig load_sweep_config(const std::string& path);

/// Canonical text form; grids are written out point by point with
/// round-trip precision, so parse(serialize(c)) == c.
std::string serialize_sweep_config(const SweepConfig& config);

/// Parses one value list ("0.1, grid(0, 1, 11)"). Throws std::invalid_argument.
std::vector<double> parse_value_list(const std::string& text);

}  // namespace rabi::cli
