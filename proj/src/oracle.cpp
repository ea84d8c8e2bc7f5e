#include "chainkit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "chainkit/error.hpp"

namespace chainkit {
namespace {

std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> c(k);
  for (std::size_t i = 0; i < k; ++i) c[i] = i;
  if (k > n) return out;
  while (true) {
    out.push_back(c);
    std::size_t i = k;
    while (i > 0 && c[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++c[i - 1];
    for (std::size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
  }
  return out;
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

double falling_factorial(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= n - i;
  return r;
}

std::vector<std::size_t> node_indices(const MeasureSpace& space, const std::vector<double>& xs) {
  std::vector<std::size_t> out;
  for (double x : xs) {
    const long i = space.find_node(x);
    if (i < 0) throw ArgumentError("oracle: point " + std::to_string(x) + " is not a node");
    out.push_back(static_cast<std::size_t>(i));
  }
  return out;
}

bool contains_all(const std::vector<std::size_t>& config, const std::vector<std::size_t>& wanted) {
  for (std::size_t w : wanted)
    if (std::find(config.begin(), config.end(), w) == config.end()) return false;
  return true;
}

void require_discrete(const ChainSpec& spec) {
  for (const auto& s : spec.spaces)
    if (s.kind() != MeasureKind::Discrete) throw ArgumentError("enumeration requires discrete spaces");
}

}  // namespace

EnumerationTable enumerate(const ChainSpec& spec, const BiorthogonalSystem& bio, const EnumerationOptions& opts) {
  require_discrete(spec);
  const auto n = static_cast<std::size_t>(spec.particles);
  double count = 1.0;
  for (const auto& s : spec.spaces) count *= binomial(s.size(), n);
  if (count > static_cast<double>(opts.max_configurations))
    throw ArgumentError("enumeration: " + std::to_string(count) + " configurations exceed the limit");

  std::vector<std::vector<std::vector<std::size_t>>> combos;
  for (const auto& s : spec.spaces) combos.push_back(combinations(s.size(), n));

  EnumerationTable table;
  const int m = spec.levels;
  std::vector<std::size_t> pick(m, 0);
  if (count == 0.0) return table;
  LevelPoints pts(m, std::vector<double>(n));
  bool clamped = false;
  while (true) {
    Configuration c;
    double measure = 1.0;
    for (int j = 0; j < m; ++j) {
      c.nodes.push_back(combos[j][pick[j]]);
      const auto xs = spec.spaces[j].nodes();
      const auto mu = spec.spaces[j].weights();
      for (std::size_t a = 0; a < n; ++a) {
        pts[j][a] = xs[c.nodes[j][a]];
        measure *= mu[c.nodes[j][a]];
      }
    }
    c.mass = joint_density_product(spec, bio, pts) * measure;
    if (c.mass < 0.0 && !opts.allow_signed) {
      if (c.mass < -opts.clamp_tolerance)
        throw PositivityError("enumeration: negative configuration mass " + std::to_string(c.mass) +
                              "; the ensemble is not positive for this chain");
      c.mass = 0.0;
      clamped = true;
    }
    table.total_mass += c.mass;
    table.configurations.push_back(std::move(c));

    int j = m - 1;
    while (j >= 0 && ++pick[j] == combos[j].size()) pick[j--] = 0;
    if (j < 0) break;
  }
  if (clamped) table.warnings.push_back("tiny negative masses clamped to zero");
  return table;
}

double enumerated_gap(const ChainSpec& spec, const EnumerationTable& table, const std::vector<Region>& regions) {
  double sum = 0.0;
  for (const auto& c : table.configurations) {
    bool avoids = true;
    for (int j = 0; j < spec.levels && avoids; ++j)
      for (std::size_t i : c.nodes[j])
        if (regions[j].contains(spec.spaces[j].nodes()[i])) avoids = false;
    if (avoids) sum += c.mass;
  }
  return sum;
}

double enumerated_correlator(const ChainSpec& spec, const EnumerationTable& table, const LevelPoints& points) {
  const int n = spec.particles;
  std::vector<std::vector<std::size_t>> wanted;
  double measure = 1.0;
  double labelled_share = 1.0;  // fraction of orderings with the points in the first k slots
  double multiplicity = 1.0;
  for (int j = 0; j < spec.levels; ++j) {
    wanted.push_back(node_indices(spec.spaces[j], points[j]));
    auto sorted = wanted.back();
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return 0.0;
    for (std::size_t i : wanted.back()) measure *= spec.spaces[j].weights()[i];
    const int k = static_cast<int>(points[j].size());
    labelled_share /= falling_factorial(n, k);
    multiplicity *= falling_factorial(n, k);
  }
  double marginal = 0.0;
  for (const auto& c : table.configurations) {
    bool ok = true;
    for (int j = 0; j < spec.levels && ok; ++j) ok = contains_all(c.nodes[j], wanted[j]);
    if (ok) marginal += c.mass * labelled_share;
  }
  return marginal * multiplicity / measure;
}

double enumerated_count_probability(const ChainSpec& spec, const EnumerationTable& table,
                                    const std::vector<std::vector<Region>>& regions, const std::vector<int>& counts) {
  double sum = 0.0;
  for (const auto& c : table.configurations) {
    bool match = true;
    std::size_t var = 0;
    for (int j = 0; j < spec.levels && match; ++j) {
      for (const auto& reg : regions[j]) {
        int k = 0;
        for (std::size_t i : c.nodes[j])
          if (reg.contains(spec.spaces[j].nodes()[i])) ++k;
        if (k != counts[var++]) {
          match = false;
          break;
        }
      }
    }
    if (match) sum += c.mass;
  }
  return sum;
}

double enumerated_janossy(const ChainSpec& spec, const EnumerationTable& table, const std::vector<Region>& regions,
                          const LevelPoints& points) {
  std::vector<std::vector<std::size_t>> wanted;
  double measure = 1.0;
  for (int j = 0; j < spec.levels; ++j) {
    wanted.push_back(node_indices(spec.spaces[j], points[j]));
    for (std::size_t i : wanted.back()) measure *= spec.spaces[j].weights()[i];
  }
  double sum = 0.0;
  for (const auto& c : table.configurations) {
    bool ok = true;
    for (int j = 0; j < spec.levels && ok; ++j) {
      if (!contains_all(c.nodes[j], wanted[j])) {
        ok = false;
        break;
      }
      for (std::size_t i : c.nodes[j]) {
        const bool is_wanted = std::find(wanted[j].begin(), wanted[j].end(), i) != wanted[j].end();
        if (!is_wanted && regions[j].contains(spec.spaces[j].nodes()[i])) ok = false;
      }
    }
    if (ok) sum += c.mass;
  }
  return sum / measure;
}

// --- Rng -------------------------------------------------------------------------

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 == 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double th = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(th);
  has_spare_ = true;
  return r * std::cos(th);
}

std::uint64_t Rng::below(std::uint64_t n) {
  // rejection keeps the draw unbiased
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v = engine_();
  while (v >= limit) v = engine_();
  return v % n;
}

// --- Metropolis ----------------------------------------------------------------------

McmcResult mcmc_sample(const ChainSpec& spec, const BiorthogonalSystem& bio, const McmcOptions& opts,
                       const std::vector<Observable>& observables, const SampleSink& sink) {
  for (const auto& s : spec.spaces)
    if (s.kind() != MeasureKind::Quadrature) throw ArgumentError("mcmc_sample requires quadrature (continuous) spaces");
  const int m = spec.levels;
  const int n = spec.particles;
  const std::uint64_t burn_in = opts.burn_in ? opts.burn_in : opts.steps / 10;
  Rng rng(opts.seed);

  // Start from evenly spread nodes on each level.
  LevelPoints x(m, std::vector<double>(n));
  for (int j = 0; j < m; ++j) {
    const auto xs = spec.spaces[j].nodes();
    for (int a = 0; a < n; ++a) x[j][a] = xs[(a + 1) * xs.size() / (n + 1)];
  }
  double density = joint_density_product(spec, bio, x);
  for (int attempt = 0; density == 0.0 && attempt < 1000; ++attempt) {
    for (int j = 0; j < m; ++j)
      for (auto& v : x[j]) {
        const double cand = v + 0.1 * rng.normal();
        if (spec.spaces[j].in_support(cand)) v = cand;
      }
    density = joint_density_product(spec, bio, x);
  }
  if (density == 0.0) throw NumericalError("mcmc_sample: no starting configuration with nonzero density");

  double step = opts.initial_step;
  const std::size_t nobs = observables.size();
  const std::uint64_t kept = opts.steps > burn_in ? opts.steps - burn_in : 0;
  const std::size_t batches = std::max<std::size_t>(1, std::min<std::uint64_t>(opts.batches, std::max<std::uint64_t>(kept, 1)));
  const std::uint64_t batch_len = std::max<std::uint64_t>(1, kept / batches);

  std::vector<double> total_sf(nobs, 0.0);
  double total_s = 0.0;
  std::vector<std::vector<double>> batch_sf(batches, std::vector<double>(nobs, 0.0));
  std::vector<double> batch_s(batches, 0.0);

  std::uint64_t accepted = 0;
  std::uint64_t window_accepted = 0;
  std::uint64_t negative = 0;
  constexpr std::uint64_t kTuneWindow = 500;

  for (std::uint64_t t = 0; t < opts.steps; ++t) {
    const auto j = static_cast<int>(rng.below(static_cast<std::uint64_t>(m)));
    const auto a = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    const double old = x[j][a];
    const double cand = old + step * rng.normal();
    bool accept = false;
    if (spec.spaces[j].in_support(cand, 0.0)) {
      x[j][a] = cand;
      const double pd = joint_density_product(spec, bio, x);
      const double ratio = std::abs(pd) / std::abs(density);
      if (ratio >= 1.0 || rng.uniform() < ratio) {
        accept = true;
        density = pd;
      } else {
        x[j][a] = old;
      }
    }

    if (t < burn_in) {
      window_accepted += accept;
      if ((t + 1) % kTuneWindow == 0) {
        const double rate = static_cast<double>(window_accepted) / kTuneWindow;
        if (rate < 0.30) step *= 0.8;
        else if (rate > 0.50) step *= 1.25;
        window_accepted = 0;
      }
      continue;
    }

    accepted += accept;
    const double sign = density > 0.0 ? 1.0 : -1.0;
    if (sign < 0.0) ++negative;
    const std::uint64_t k = t - burn_in;
    const std::size_t b = std::min<std::size_t>(batches - 1, k / batch_len);
    total_s += sign;
    batch_s[b] += sign;
    for (std::size_t o = 0; o < nobs; ++o) {
      const double f = sign * observables[o](x);
      total_sf[o] += f;
      batch_sf[b][o] += f;
    }
    if (sink) sink(k, x);
  }

  McmcResult r;
  r.samples = kept;
  r.step_size = step;
  r.acceptance_rate = kept ? static_cast<double>(accepted) / kept : 0.0;
  r.negative_sign_fraction = kept ? static_cast<double>(negative) / kept : 0.0;
  if (r.negative_sign_fraction > opts.max_negative_fraction)
    throw PositivityError("mcmc_sample: negative-sign fraction " + std::to_string(r.negative_sign_fraction) +
                          " exceeds limit; the ensemble is not positive");

  for (std::size_t o = 0; o < nobs; ++o) {
    Estimate est;
    est.mean = total_s != 0.0 ? total_sf[o] / total_s : 0.0;
    if (batches > 1) {
      double acc = 0.0;
      std::size_t used = 0;
      for (std::size_t b = 0; b < batches; ++b) {
        if (batch_s[b] == 0.0) continue;
        const double d = batch_sf[b][o] / batch_s[b] - est.mean;
        acc += d * d;
        ++used;
      }
      if (used > 1) est.standard_error = std::sqrt(acc / (used - 1) / used);
    }
    r.estimates.push_back(est);
  }
  return r;
}

}  // namespace chainkit
