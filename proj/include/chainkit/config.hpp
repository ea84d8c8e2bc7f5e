#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "chainkit/chain_model.hpp"
#include "chainkit/statistics.hpp"

namespace chainkit {

/// One `[level j]` section.
struct LevelConfig {
  enum class Space { Real, Interval, Discrete };
  Space space = Space::Real;
  std::vector<Interval> intervals;                   // Space::Interval
  std::vector<std::pair<double, double>> discrete;   // (x, weight), Space::Discrete
  std::string potential = "quadratic";
  std::vector<double> potential_params;
  std::vector<Interval> region;            // gap / Janossy region J_j
  std::vector<Atom> rho_atoms;
  std::vector<IndicatorTerm> rho_sets;     // each with a single interval
  std::vector<double> points;
  std::vector<Interval> count_regions;     // one counting variable each
  bool operator==(const LevelConfig&) const = default;
};

/// One `[coupling j]` section (between levels j and j+1).
struct CouplingConfig {
  std::string type = "exponential";
  std::vector<double> params;
  bool operator==(const CouplingConfig&) const = default;
};

struct Config {
  int m = 1;
  int particles = 1;
  BasisFamily basis = BasisFamily::AllMonomials;
  int order = 64;
  int panels = 1;
  double truncation = 8.0;  // `real` spaces become [-L, L]
  int series_terms = 64;
  double tolerance = 1e-8;
  std::uint64_t seed = 1;
  std::uint64_t steps = 1'000'000;
  int threads = 1;
  std::vector<LevelConfig> levels;
  std::vector<CouplingConfig> couplings;
  bool operator==(const Config&) const = default;
};

/// Parses the line-oriented `key = value` format. `#` starts a comment.
/// Throws ConfigError carrying the offending line number.
Config parse_config(const std::string& text);

/// Canonical text form; parse_config(emit_config(c)) == c.
std::string emit_config(const Config& c);

/// Chain described by the config. Region, rho and counting endpoints become
/// panel breakpoints of quadrature spaces. Measure errors propagate unchanged;
/// chain validation happens in build_ensemble.
ChainSpec build_chain(const Config& c);

std::vector<Region> config_regions(const Config& c);
RhoSpec config_rho(const Config& c);
LevelPoints config_points(const Config& c);
std::vector<std::vector<Region>> config_count_regions(const Config& c);

}  // namespace chainkit
