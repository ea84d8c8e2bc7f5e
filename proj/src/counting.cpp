#include "chainkit/counting.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "chainkit/error.hpp"

namespace chainkit {

double CountTable::probability(std::span<const int> counts) const {
  if (counts.size() != variables_)
    throw ArgumentError("count vector has " + std::to_string(counts.size()) + " entries, expected " +
                        std::to_string(variables_));
  std::size_t idx = 0;
  for (int k : counts) {
    if (k < 0 || k > particles_)
      throw ArgumentError("requested count " + std::to_string(k) + " exceeds the polynomial degree N=" +
                          std::to_string(particles_));
    idx = idx * (particles_ + 1) + static_cast<std::size_t>(k);
  }
  return probabilities_[idx];
}

std::vector<std::vector<int>> CountTable::count_vectors() const {
  std::vector<std::vector<int>> out;
  std::vector<int> k(variables_, 0);
  for (std::size_t idx = 0; idx < probabilities_.size(); ++idx) {
    out.push_back(k);
    for (std::size_t l = variables_; l-- > 0;) {
      if (++k[l] <= particles_) break;
      k[l] = 0;
    }
  }
  return out;
}

CountingGenerator::CountingGenerator(const Ensemble& e, std::vector<std::vector<Region>> regions)
    : particles_(e.spec.particles) {
  if (regions.size() != static_cast<std::size_t>(e.spec.levels))
    throw ArgumentError("counting: expected one region list per level");
  int var = 0;
  for (int j = 0; j < e.spec.levels; ++j) {
    const auto& regs = regions[j];
    for (std::size_t a = 0; a < regs.size(); ++a)
      for (std::size_t b = 0; b < a; ++b)
        for (const auto& ia : regs[a].intervals)
          for (const auto& ib : regs[b].intervals)
            if (std::max(ia.lo, ib.lo) < std::min(ia.hi, ib.hi))
              throw ArgumentError("counting: regions on level " + std::to_string(j + 1) + " overlap");

    const auto xs = e.spec.spaces[j].nodes();
    const auto mu = e.spec.spaces[j].weights();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      int owner = -1;
      for (std::size_t r = 0; r < regs.size(); ++r) {
        if (!regs[r].contains(xs[i])) continue;
        if (owner >= 0) throw ArgumentError("counting: node " + std::to_string(xs[i]) + " lies in two regions");
        owner = static_cast<int>(r);
      }
      if (owner >= 0) {
        grid_.push_back({j, i});
        grid_variable_.push_back(var + owner);
        grid_mu_.push_back(mu[i]);
      }
    }
    for (std::size_t r = 0; r < regs.size(); ++r) variable_level_.push_back(j);
    var += static_cast<int>(regs.size());
  }
  kernel_ = detail::grid_kernel(e.kernel, grid_);
}

double CountingGenerator::evaluate(std::span<const double> z) const {
  if (z.size() != variables()) throw ArgumentError("counting: wrong number of z values");
  const std::size_t d = grid_.size();
  if (d == 0) return 1.0;
  Vector omega(d);
  for (std::size_t i = 0; i < d; ++i) omega(i) = grid_mu_[i] * z[grid_variable_[i]];
  return determinant(Matrix::Identity(d, d) - kernel_ * omega.asDiagonal());
}

CountTable CountingGenerator::extract() const {
  const std::size_t nvar = variables();
  const int deg = particles_;
  const std::size_t base = static_cast<std::size_t>(deg) + 1;
  std::size_t total = 1;
  for (std::size_t l = 0; l < nvar; ++l) {
    total *= base;
    if (total > 2'000'000) throw ArgumentError("counting: too many region variables for coefficient extraction");
  }

  // Chebyshev points in t = 1 - z.
  std::vector<double> t(base);
  for (std::size_t i = 0; i < base; ++i) t[i] = std::cos(std::numbers::pi * (2.0 * i + 1.0) / (2.0 * base));
  Matrix vander(base, base);
  for (std::size_t i = 0; i < base; ++i)
    for (std::size_t k = 0; k < base; ++k) vander(i, k) = std::pow(t[i], static_cast<double>(k));
  const Matrix inv = vander.inverse();

  std::vector<double> values(total);
  std::vector<double> z(nvar);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    for (std::size_t l = nvar; l-- > 0;) {
      z[l] = 1.0 - t[rem % base];
      rem /= base;
    }
    values[idx] = evaluate(z);
  }

  // Apply the inverse Vandermonde along each axis.
  std::size_t stride = total;
  for (std::size_t l = 0; l < nvar; ++l) {
    stride /= base;
    std::vector<double> next(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
      const std::size_t k = (idx / stride) % base;
      const std::size_t origin = idx - k * stride;
      double acc = 0.0;
      for (std::size_t i = 0; i < base; ++i) acc += inv(k, i) * values[origin + i * stride];
      next[idx] = acc;
    }
    values = std::move(next);
  }
  return CountTable(particles_, std::move(values), nvar);
}

}  // namespace chainkit
