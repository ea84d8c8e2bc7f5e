#pragma once

#include <span>
#include <vector>

#include "chainkit/statistics.hpp"

namespace chainkit {

/// Joint counting distribution over the regions J_{jl}, indexed by one count
/// per region in level-major order, each count in 0..N.
class CountTable {
 public:
  CountTable(int particles, std::vector<double> probabilities, std::size_t variables)
      : particles_(particles), variables_(variables), probabilities_(std::move(probabilities)) {}

  std::size_t variables() const { return variables_; }
  int particles() const { return particles_; }

  /// P(exactly counts[l] points in region l, for all l). Throws ArgumentError
  /// when a count exceeds N or the vector has the wrong length.
  double probability(std::span<const int> counts) const;

  /// Flattened table; entry index is sum_l counts[l] (N+1)^(L-1-l).
  const std::vector<double>& values() const { return probabilities_; }

  /// Enumerates every count vector in table order.
  std::vector<std::vector<int>> count_vectors() const;

 private:
  int particles_;
  std::size_t variables_;
  std::vector<double> probabilities_;
};

/// det(I - Kcheck o rho(z)) with rho_j = sum_l z_{jl} chi_{J_{jl}}. This is
/// E[prod_{jl} (1 - z_{jl})^{n_{jl}}], a polynomial of degree <= N in each
/// z_{jl}; count probabilities are its coefficients in t = 1 - z.
class CountingGenerator {
 public:
  /// regions[j] lists the disjoint subregions on level j (may be empty).
  CountingGenerator(const Ensemble& e, std::vector<std::vector<Region>> regions);

  std::size_t variables() const { return variable_level_.size(); }

  /// Generating function at z (one entry per region, level-major).
  double evaluate(std::span<const double> z) const;

  /// Coefficient extraction by tensor-product interpolation on the N+1
  /// Chebyshev points of each variable, z in [0, 2].
  CountTable extract() const;

 private:
  int particles_;
  std::vector<int> variable_level_;
  std::vector<detail::GridPoint> grid_;
  std::vector<int> grid_variable_;  // region index of each grid point
  std::vector<double> grid_mu_;
  Matrix kernel_;
};

}  // namespace chainkit
