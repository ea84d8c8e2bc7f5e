#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "chainkit/config.hpp"

namespace chainkit {

/// Command-line overrides applied on top of the config file.
struct CliOptions {
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<double> tolerance;
  std::optional<int> quad_order;
  std::optional<double> truncation;
  std::optional<std::uint64_t> steps;
  std::string dump_blocks;  // path for the Kcheck block dump, empty = off
  std::string samples;      // path for the MCMC sample stream, empty = off
};

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitConfig = 2, kExitIdentity = 3 };

/// 17 significant digits, '.' decimal.
std::string csv_number(double v);
/// RFC 4180 quoting when the field contains a comma, quote or newline.
std::string csv_field(const std::string& s);

void apply_overrides(Config& c, const CliOptions& opts);

/// Runs one of verify-identity, gap, correlator, janossy, counts, density,
/// enumerate, sample on the config text. The CSV result goes to `out`,
/// diagnostics to `err`. Returns the process exit code.
int run_command(const std::string& cmd, const std::string& config_text, const CliOptions& opts, std::ostream& out,
                std::ostream& err);

}  // namespace chainkit
