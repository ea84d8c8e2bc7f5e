#include <cmath>

#include "chainkit/kernel.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace chainkit;

namespace {

double reproducing_residual(const Ensemble& e) {
  const int m = e.spec.levels;
  double worst = 0.0;
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k)
      for (int j = 0; j < m; ++j) {
        const auto mu = e.spec.spaces[k].weights();
        Vector w(mu.size());
        for (std::size_t q = 0; q < mu.size(); ++q) w(q) = mu[q];
        const Matrix comp = e.kernel.k(i, k) * w.asDiagonal() * e.kernel.k(k, j);
        const double scale = std::max(1.0, e.kernel.k(i, j).cwiseAbs().maxCoeff());
        worst = std::max(worst, (comp - e.kernel.k(i, j)).cwiseAbs().maxCoeff() / scale);
      }
  return worst;
}

double composite_residual(const Ensemble& e) {
  const int m = e.spec.levels;
  double worst = 0.0;
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < k; ++l)
      for (int j = 0; j < l; ++j) {
        const auto mu = e.spec.spaces[l].weights();
        Vector w(mu.size());
        for (std::size_t q = 0; q < mu.size(); ++q) w(q) = mu[q];
        const Matrix comp = e.kernel.w(k, l) * w.asDiagonal() * e.kernel.w(l, j);
        const double scale = std::max(1.0, e.kernel.w(k, j).cwiseAbs().maxCoeff());
        worst = std::max(worst, (comp - e.kernel.w(k, j)).cwiseAbs().maxCoeff() / scale);
      }
  return worst;
}

double trace_error(const Ensemble& e) {
  double worst = 0.0;
  for (int j = 0; j < e.spec.levels; ++j) {
    double tr = 0.0;
    const auto mu = e.spec.spaces[j].weights();
    for (std::size_t q = 0; q < mu.size(); ++q) tr += e.kernel.k(j, j)(q, q) * mu[q];
    worst = std::max(worst, std::abs(tr - e.spec.particles));
  }
  return worst;
}

}  // namespace

TEST_SUITE("kernel") {
  TEST_CASE("reproducing property, composites and trace on random discrete chains") {
    testsupport::Rng rng(23);
    for (int trial = 0; trial < 60; ++trial) {
      auto e = testsupport::random_ensemble(rng);
      CHECK(reproducing_residual(e) < 1e-10);
      CHECK(composite_residual(e) < 1e-10);
      CHECK(trace_error(e) < 1e-10);
    }
  }

  TEST_CASE("composite blocks vanish on and above the diagonal; nearest neighbour is the transfer") {
    testsupport::Rng rng(29);
    auto e = testsupport::random_discrete_ensemble(rng, {3, 2, BasisFamily::AllMonomials, 0});
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) CHECK(e.kernel.w(i, j).cwiseAbs().maxCoeff() == 0.0);
    const auto xs1 = e.spec.spaces[1].nodes();
    const auto xs0 = e.spec.spaces[0].nodes();
    for (std::size_t a = 0; a < xs1.size(); ++a)
      for (std::size_t b = 0; b < xs0.size(); ++b) {
        const double direct = std::exp(-0.5 * e.spec.potentials[1](xs1[a])) *
                              eval_coupling(e.spec.couplings[0], xs1[a], xs0[b]) *
                              std::exp(-0.5 * e.spec.potentials[0](xs0[b]));
        CHECK(std::abs(e.kernel.w(1, 0)(a, b) - direct) < 1e-14 * std::max(1.0, std::abs(direct)));
      }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK((e.kernel.kcheck(i, j) - (e.kernel.k(i, j) - e.kernel.w(i, j))).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("Gaussian chain: reproducing property and trace on quadrature grids") {
    ChainSpec s;
    s.levels = 3;
    s.particles = 3;
    for (int j = 0; j < 3; ++j) {
      s.spaces.push_back(composite_rule(48, {{-8, 8}}, 2));
      s.potentials.push_back(Potential::quadratic());
    }
    s.couplings = {Coupling::exponential(), Coupling::exponential()};
    auto e = build_ensemble(s);
    CHECK(reproducing_residual(e) < 1e-10);
    CHECK(composite_residual(e) < 1e-10);
    CHECK(trace_error(e) < 1e-10);
  }

  TEST_CASE("evaluator agrees with grid blocks at nodes") {
    testsupport::Rng rng(31);
    auto e = testsupport::random_discrete_ensemble(rng, {3, 2, BasisFamily::AllMonomials, -1});
    KernelEvaluator ev(e);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const auto xi = e.spec.spaces[i].nodes();
        const auto xj = e.spec.spaces[j].nodes();
        for (std::size_t a = 0; a < xi.size(); ++a)
          for (std::size_t b = 0; b < xj.size(); ++b) {
            const double g = e.kernel.kcheck(i, j)(a, b);
            CHECK(std::abs(ev.kcheck(i, j, xi[a], xj[b]) - g) < 1e-11 * std::max(1.0, std::abs(g)));
          }
      }
  }
}
