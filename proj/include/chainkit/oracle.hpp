#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "chainkit/biorthogonal.hpp"
#include "chainkit/chain_model.hpp"
#include "chainkit/statistics.hpp"

namespace chainkit {

// ---------------------------------------------------------------------------
// Exhaustive enumeration over discrete chains. Everything here consumes only
// the product-form joint density; none of it touches the block kernel.
// ---------------------------------------------------------------------------

/// One unordered configuration: per level, sorted node indices of the N points.
struct Configuration {
  std::vector<std::vector<std::size_t>> nodes;
  double mass = 0.0;
};

struct EnumerationTable {
  std::vector<Configuration> configurations;
  double total_mass = 0.0;
  std::vector<std::string> warnings;
};

struct EnumerationOptions {
  std::size_t max_configurations = 1'000'000;
  /// Keep negative masses instead of failing (signed-measure identities still hold).
  bool allow_signed = false;
  /// Negative masses above -clamp_tolerance are rounding and get clamped to 0.
  double clamp_tolerance = 1e-14;
};

/// Probability of every unordered configuration: the product density at the
/// sorted points times the node weights. Requires Discrete spaces.
/// Throws ArgumentError if the state space is too large and PositivityError
/// on a genuinely negative mass.
EnumerationTable enumerate(const ChainSpec& spec, const BiorthogonalSystem& bio, const EnumerationOptions& opts = {});

/// P(no level-j point in regions[j], all j).
double enumerated_gap(const ChainSpec& spec, const EnumerationTable& table, const std::vector<Region>& regions);

/// Correlation density at node points, from the labelled marginal of the first
/// k_j particles on each level multiplied by prod_j N!/(N-k_j)!.
double enumerated_correlator(const ChainSpec& spec, const EnumerationTable& table, const LevelPoints& points);

/// P(exactly counts[l] points in region l) for regions listed level-major.
double enumerated_count_probability(const ChainSpec& spec, const EnumerationTable& table,
                                    const std::vector<std::vector<Region>>& regions, const std::vector<int>& counts);

/// Density of points exactly at `points` with every other point outside J.
double enumerated_janossy(const ChainSpec& spec, const EnumerationTable& table, const std::vector<Region>& regions,
                          const LevelPoints& points);

// ---------------------------------------------------------------------------
// Metropolis sampler for continuous chains.
// ---------------------------------------------------------------------------

/// mt19937_64 with hand-rolled uniform and Box-Muller normal draws so streams
/// do not depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform();  // [0, 1), 53 random bits
  double normal();
  std::uint64_t below(std::uint64_t n);  // uniform integer in [0, n)

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct McmcOptions {
  std::uint64_t steps = 1'000'000;
  std::uint64_t seed = 1;
  /// 0 means steps / 10.
  std::uint64_t burn_in = 0;
  double initial_step = 0.5;
  std::size_t batches = 100;
  double max_negative_fraction = 0.01;
};

struct Estimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

struct McmcResult {
  double acceptance_rate = 0.0;  // after burn-in
  double negative_sign_fraction = 0.0;
  double step_size = 0.0;        // frozen value after tuning
  std::uint64_t samples = 0;
  std::vector<Estimate> estimates;  // sign-weighted, one per observable
};

using Observable = std::function<double(const LevelPoints&)>;
using SampleSink = std::function<void(std::uint64_t step, const LevelPoints&)>;

/// Single-coordinate random-walk Metropolis over the m N coordinates with
/// target |P| and sign tracking. The step is tuned toward 30-50% acceptance
/// during burn-in and then frozen. Requires Quadrature spaces. Throws
/// PositivityError if the negative-sign fraction exceeds the limit.
McmcResult mcmc_sample(const ChainSpec& spec, const BiorthogonalSystem& bio, const McmcOptions& opts,
                       const std::vector<Observable>& observables, const SampleSink& sink = {});

}  // namespace chainkit
