// Shared generators and brute-force oracles for the test binaries.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "chainkit/biorthogonal.hpp"
#include "chainkit/chain_model.hpp"
#include "chainkit/error.hpp"
#include "chainkit/kernel.hpp"
#include "chainkit/measure.hpp"
#include "chainkit/statistics.hpp"

namespace testsupport {

using chainkit::BasisFamily;
using chainkit::ChainSpec;
using chainkit::Coupling;
using chainkit::Matrix;
using chainkit::Potential;
using Rng = std::mt19937_64;

/// Minimum node separation in random discrete spaces.
inline constexpr double kMinGap = 0.25;
/// Random nodes lie in [-kNodeRange, kNodeRange].
inline constexpr double kNodeRange = 3.0;
/// Chains whose moment matrix is worse conditioned than this are redrawn.
inline constexpr double kMaxCondition = 1e6;

inline double unif(Rng& r, double a, double b) { return std::uniform_real_distribution<double>(a, b)(r); }
inline int uint(Rng& r, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(r); }

/// n distinct nodes in [-kNodeRange, kNodeRange].
inline std::vector<double> random_nodes(Rng& r, int n) {
  std::vector<double> xs;
  while (static_cast<int>(xs.size()) < n) {
    const double x = std::round(unif(r, -kNodeRange, kNodeRange) * 1e6) / 1e6;
    bool clash = false;
    for (double y : xs) clash = clash || std::abs(x - y) < kMinGap;
    if (!clash) xs.push_back(x);
  }
  return xs;
}

/// Symmetric node set with k positive values, their negatives and maybe 0.
inline std::vector<double> random_symmetric_nodes(Rng& r, int k, bool with_zero) {
  std::vector<double> pos;
  while (static_cast<int>(pos.size()) < k) {
    const double x = std::round(unif(r, 0.1, kNodeRange) * 1e6) / 1e6;
    bool clash = false;
    for (double y : pos) clash = clash || std::abs(x - y) < kMinGap;
    if (!clash) pos.push_back(x);
  }
  std::vector<double> xs;
  for (double x : pos) {
    xs.push_back(x);
    xs.push_back(-x);
  }
  if (with_zero) xs.push_back(0.0);
  return xs;
}

inline std::vector<double> random_weights(Rng& r, std::size_t n) {
  std::vector<double> w(n);
  for (auto& v : w) v = unif(r, 0.2, 1.0);
  return w;
}

inline Potential random_potential(Rng& r, bool even) {
  switch (uint(r, 0, 3)) {
    case 0: return Potential::quadratic(unif(r, 0.05, 0.4));
    case 1: return Potential::quartic(unif(r, -0.2, 0.2), unif(r, 0.01, 0.05));
    case 2:
      if (even) return Potential::polynomial({unif(r, -0.3, 0.3), 0.0, unif(r, 0.05, 0.3)});
      return Potential::polynomial({unif(r, -0.3, 0.3), unif(r, -0.3, 0.3), unif(r, 0.05, 0.3), unif(r, -0.02, 0.02)});
    default: return Potential::zero();
  }
}

/// kind: 0 exponential, 1 cosh, 2 sinh, 3 power law, 4 series.
inline Coupling random_coupling(Rng& r, int kind, int particles) {
  switch (kind) {
    case 0: return Coupling::exponential();
    case 1: return Coupling::cosh();
    case 2: return Coupling::sinh();
    case 3: {
      // keeps |z x y| <= 0.9 on the node range
      const double zmax = 0.9 / (kNodeRange * kNodeRange);
      return Coupling::power_law(unif(r, -zmax, zmax), unif(r, -2.0, particles + 1.0));
    }
    default: {
      std::vector<double> ratios(uint(r, 3, 5));
      for (auto& v : ratios) v = unif(r, -0.5, 0.5);
      return Coupling::series(ratios);
    }
  }
}

struct DiscreteChainShape {
  int levels;
  int particles;
  BasisFamily basis;
  int coupling_kind;  // -1 = random per link
};

/// Random discrete chain with n_j in 3..6. Parity bases pair with the
/// matching cosh/sinh couplings, even potentials and symmetric nodes.
inline ChainSpec random_discrete_chain(Rng& r, const DiscreteChainShape& shape) {
  ChainSpec spec;
  spec.levels = shape.levels;
  spec.particles = shape.particles;
  spec.basis = shape.basis;
  const bool parity = shape.basis != BasisFamily::AllMonomials;
  for (int j = 0; j < shape.levels; ++j) {
    std::vector<double> xs;
    if (shape.basis == BasisFamily::EvenMonomials) {
      // N distinct |x| including possibly 0
      const bool zero = uint(r, 0, 1) == 1;
      const int k = std::max(zero ? shape.particles - 1 : shape.particles, 2);
      xs = random_symmetric_nodes(r, std::min(k, 3), zero && k < 3);
    } else if (shape.basis == BasisFamily::OddMonomials) {
      const int k = std::max(shape.particles, 2);
      xs = random_symmetric_nodes(r, k, k < 3 && uint(r, 0, 1) == 1);
    } else {
      xs = random_nodes(r, uint(r, std::max(3, shape.particles), 6));
    }
    const auto w = random_weights(r, xs.size());
    spec.spaces.push_back(chainkit::discrete_space(xs, w));
    spec.potentials.push_back(random_potential(r, parity));
  }
  for (int j = 0; j + 1 < shape.levels; ++j) {
    int kind = shape.coupling_kind >= 0 ? shape.coupling_kind : uint(r, 0, 4);
    if (shape.basis == BasisFamily::EvenMonomials) kind = 1;
    if (shape.basis == BasisFamily::OddMonomials) kind = 2;
    spec.couplings.push_back(random_coupling(r, kind, shape.particles));
  }
  return spec;
}

inline DiscreteChainShape random_shape(Rng& r) {
  DiscreteChainShape s{uint(r, 1, 3), uint(r, 1, 3), BasisFamily::AllMonomials, -1};
  const int b = uint(r, 0, 5);
  if (b == 4) s.basis = BasisFamily::EvenMonomials;
  if (b == 5) s.basis = BasisFamily::OddMonomials;
  return s;
}

/// Condition number of the moment matrix after row and column equilibration.
/// Elimination without pivoting is invariant under that scaling, so this is
/// the conditioning that actually limits the biorthogonal system.
inline double scaled_condition(const ChainSpec& spec) {
  Matrix t = chainkit::chain_moment_matrix(spec).entries;
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    const double r = t.row(i).cwiseAbs().maxCoeff();
    if (r > 0) t.row(i) /= r;
  }
  for (Eigen::Index j = 0; j < t.cols(); ++j) {
    const double c = t.col(j).cwiseAbs().maxCoeff();
    if (c > 0) t.col(j) /= c;
  }
  return chainkit::condition_number(t);
}

/// Draws chains until one has a well-conditioned moment matrix.
inline chainkit::Ensemble random_discrete_ensemble(Rng& r, const DiscreteChainShape& shape) {
  for (int attempt = 0;; ++attempt) {
    try {
      auto spec = chainkit::require_valid(random_discrete_chain(r, shape));
      if (scaled_condition(spec) < kMaxCondition) return chainkit::build_ensemble(spec);
    } catch (const chainkit::DegenerateEnsembleError&) {
    } catch (const chainkit::ChainError&) {
    }
    if (attempt > 10000) throw chainkit::ArgumentError("no well-conditioned chain of the requested shape");
  }
}

/// Number of draws rejected by random_ensemble so far (for reporting).
inline int& rejected_draws() {
  static int n = 0;
  return n;
}

/// Random shape and chain, both redrawn until the chain is well conditioned.
inline chainkit::Ensemble random_ensemble(Rng& r) {
  while (true) {
    const DiscreteChainShape shape = random_shape(r);
    try {
      auto spec = chainkit::require_valid(random_discrete_chain(r, shape));
      if (scaled_condition(spec) < kMaxCondition) return chainkit::build_ensemble(spec);
    } catch (const chainkit::DegenerateEnsembleError&) {
    } catch (const chainkit::ChainError&) {
    }
    ++rejected_draws();
  }
}

/// Random mixed rho on a discrete chain: atoms at distinct nodes and weighted
/// indicator sets (intervals or node subsets).
inline chainkit::RhoSpec random_rho(Rng& r, const ChainSpec& spec) {
  chainkit::RhoSpec rho;
  for (int j = 0; j < spec.levels; ++j) {
    chainkit::LevelRho lv;
    const auto xs = spec.spaces[j].nodes();
    std::vector<std::size_t> idx(xs.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), r);
    const int atoms = uint(r, 0, 2);
    for (int a = 0; a < atoms; ++a) lv.atoms.push_back({unif(r, -1.0, 1.0), xs[idx[a]]});
    const int sets = uint(r, 0, 2);
    for (int s = 0; s < sets; ++s) {
      chainkit::Region reg;
      if (uint(r, 0, 1) == 0) {
        double a = unif(r, -kNodeRange, kNodeRange);
        double b = unif(r, -kNodeRange, kNodeRange);
        if (a > b) std::swap(a, b);
        reg = chainkit::Region::of({{a, b}});
      } else {
        std::vector<double> pick;
        for (double x : xs)
          if (uint(r, 0, 2) == 0) pick.push_back(x);
        reg = chainkit::Region::nodes(pick);
      }
      lv.sets.push_back({unif(r, -1.0, 1.0), reg});
    }
    rho.levels.push_back(lv);
  }
  return rho;
}

/// Effective weight of node x under (1 - rho) dmu, straight from the definition.
inline double perturbed_weight(const chainkit::LevelRho& lv, double x, double mu) {
  double s = 0.0;
  for (const auto& t : lv.sets)
    for (const auto& iv : t.region.intervals)
      if (iv.lo <= x && x <= iv.hi) {
        s += t.weight;
        break;
      }
  double w = mu * (1.0 - s);
  for (const auto& a : lv.atoms)
    if (a.location == x) w -= a.weight;
  return w;
}

/// G_ab by explicit nested summation over every node of every level, using
/// only the polynomial coefficients, the potentials and the coupling formula.
inline Matrix brute_force_G(const ChainSpec& spec, const chainkit::BiorthogonalSystem& bio,
                            const chainkit::RhoSpec& rho) {
  const int n = spec.particles;
  const int m = spec.levels;
  auto poly = [&](const Matrix& coef, int a, double x, bool rows) {
    double v = 0.0;
    for (int k = 0; k < coef.rows(); ++k)
      v += (rows ? coef(a, k) : coef(k, a)) * std::pow(x, chainkit::basis_degree(spec.basis, k));
    return v;
  };
  // Running vector over the current level's nodes: f_a(x) = integral over
  // lower levels ending at x.
  std::vector<std::vector<double>> f(n);
  {
    const auto xs = spec.spaces[0].nodes();
    const auto mu = spec.spaces[0].weights();
    for (int a = 0; a < n; ++a)
      for (std::size_t i = 0; i < xs.size(); ++i)
        f[a].push_back(poly(bio.p, a, xs[i], true) * std::exp(-spec.potentials[0](xs[i])) *
                       perturbed_weight(rho.levels[0], xs[i], mu[i]));
  }
  for (int j = 1; j < m; ++j) {
    const auto lo = spec.spaces[j - 1].nodes();
    const auto xs = spec.spaces[j].nodes();
    const auto mu = spec.spaces[j].weights();
    for (int a = 0; a < n; ++a) {
      std::vector<double> g(xs.size(), 0.0);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        double sum = 0.0;
        for (std::size_t k = 0; k < lo.size(); ++k) sum += f[a][k] * chainkit::eval_coupling(spec.couplings[j - 1], xs[i], lo[k]);
        g[i] = sum * std::exp(-spec.potentials[j](xs[i])) * perturbed_weight(rho.levels[j], xs[i], mu[i]);
      }
      f[a] = g;
    }
  }
  Matrix G(n, n);
  const auto xs = spec.spaces[m - 1].nodes();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double sum = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) sum += f[a][i] * poly(bio.s, b, xs[i], false);
      G(a, b) = sum;
    }
  return G;
}

inline double rel_diff(double a, double b, double floor = 1.0) {
  return std::abs(a - b) / std::max({floor, std::abs(a), std::abs(b)});
}

// Smallest distance between two points on the same level.
inline double min_level_separation(const chainkit::LevelPoints& pts) {
  double sep = std::numeric_limits<double>::infinity();
  for (const auto& lv : pts)
    for (std::size_t i = 0; i < lv.size(); ++i)
      for (std::size_t k = i + 1; k < lv.size(); ++k) sep = std::min(sep, std::abs(lv[i] - lv[k]));
  return sep;
}

}  // namespace testsupport
