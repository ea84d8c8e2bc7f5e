#include <cmath>

#include "chainkit/counting.hpp"
#include "chainkit/error.hpp"
#include "chainkit/oracle.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace chainkit;

TEST_SUITE("counting") {
  TEST_CASE("generating function at z = 0 and z = 1") {
    testsupport::Rng rng(71);
    auto e = testsupport::random_discrete_ensemble(rng, {2, 2, BasisFamily::AllMonomials, 0});
    const auto x0 = e.spec.spaces[0].nodes();
    const auto x1 = e.spec.spaces[1].nodes();
    std::vector<std::vector<Region>> regions = {{Region::nodes({x0[0]}), Region::nodes({x0[1], x0[2]})},
                                                {Region::nodes({x1[1]})}};
    CountingGenerator gen(e, regions);
    REQUIRE(gen.variables() == 3);
    const double zeros[] = {0, 0, 0};
    const double ones[] = {1, 1, 1};
    CHECK(std::abs(gen.evaluate(zeros) - 1.0) < 1e-14);
    const double gap = gap_probability(e, {Region::nodes({x0[0], x0[1], x0[2]}), Region::nodes({x1[1]})});
    CHECK(std::abs(gen.evaluate(ones) - gap) < 1e-13);
  }

  TEST_CASE("single particle on two nodes") {
    ChainSpec s;
    s.levels = 1;
    s.particles = 1;
    s.spaces.push_back(discrete_space({0.0, 1.0}, {1.0, 2.0}));
    s.potentials.push_back(Potential::quadratic());
    auto e = build_ensemble(s);
    const auto table = CountingGenerator(e, {{Region::nodes({0.0})}}).extract();
    const auto en = enumerate(e.spec, e.bio);
    const int one[] = {1};
    const int zero[] = {0};
    CHECK(std::abs(table.probability(one) - en.configurations[0].mass) < 1e-12);
    CHECK(std::abs(table.probability(zero) - en.configurations[1].mass) < 1e-12);
    const int two[] = {2};
    CHECK_THROWS_AS(table.probability(two), ArgumentError);
    const int wrong[] = {0, 0};
    CHECK_THROWS_AS(table.probability(wrong), ArgumentError);
  }

  TEST_CASE("count probabilities sum to one and match enumeration") {
    testsupport::Rng rng(73);
    for (int t = 0; t < 25; ++t) {
      auto e = testsupport::random_discrete_ensemble(rng, {testsupport::uint(rng, 1, 3), testsupport::uint(rng, 1, 2),
                                                           BasisFamily::AllMonomials, 0});
      std::vector<std::vector<Region>> regions(e.spec.levels);
      for (int j = 0; j < e.spec.levels; ++j) {
        const auto xs = e.spec.spaces[j].nodes();
        regions[j].push_back(Region::nodes({xs[0], xs[1]}));
        if (testsupport::uint(rng, 0, 1)) regions[j].push_back(Region::nodes({xs[2]}));
      }
      const auto table = CountingGenerator(e, regions).extract();
      double sum = 0.0;
      for (double p : table.values()) sum += p;
      CHECK(std::abs(sum - 1.0) < 1e-8);
      const auto en = enumerate(e.spec, e.bio);
      const auto vectors = table.count_vectors();
      for (std::size_t i = 0; i < vectors.size(); ++i)
        CHECK(std::abs(table.values()[i] - enumerated_count_probability(e.spec, en, regions, vectors[i])) < 1e-9);
    }
  }

  TEST_CASE("overlapping regions are rejected") {
    testsupport::Rng rng(79);
    auto e = testsupport::random_discrete_ensemble(rng, {1, 1, BasisFamily::AllMonomials, 0});
    const auto xs = e.spec.spaces[0].nodes();
    CHECK_THROWS_AS(CountingGenerator(e, {{Region::nodes({xs[0], xs[1]}), Region::nodes({xs[1]})}}), ArgumentError);
  }
}
