#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

#include "samadiego/sampling.hpp"

using namespace samadiego;

namespace {

// A level l is compatible with stratum s of width w iff the draw interval
// [l, l+1) intersects [s*w, (s+1)*w).
bool stratum_compatible(int level, int stratum, double width) {
  return level + 1.0 > stratum * width && level < (stratum + 1) * width;
}

// Checks that, per variable, the K sampled levels can be assigned one per
// stratum. Sorted levels against sorted strata is the only viable matching
// since both interval families are ordered.
bool covers_all_strata(const SampleBatch& batch, const SearchSpace& space) {
  const int K = static_cast<int>(batch.designs.size());
  for (int j = 0; j < space.dimension(); ++j) {
    const double width = static_cast<double>(space.variables[j].levels) / K;
    std::vector<int> levels;
    for (const auto& d : batch.designs) levels.push_back(d[j]);
    std::sort(levels.begin(), levels.end());
    for (int s = 0; s < K; ++s)
      if (!stratum_compatible(levels[s], s, width)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("two strata of a binary variable force coverage") {
  const auto space = SearchSpace::binary(1);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto batch = lhs_sample(space, 2, seed);
    REQUIRE(batch.designs.size() == 2);
    std::vector<int> vals{batch.designs[0][0], batch.designs[1][0]};
    std::sort(vals.begin(), vals.end());
    CHECK(vals == std::vector<int>{0, 1});
  }
}

TEST_CASE("101-level variable with K=5 lands one sample per stratum") {
  const auto space = SearchSpace::ordinal(1, 101);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto batch = lhs_sample(space, 5, seed);
    REQUIRE(batch.designs.size() == 5);
    CHECK(covers_all_strata(batch, space));
  }
}

TEST_CASE("two binary variables with K=4 balance levels exactly") {
  const auto space = SearchSpace::binary(2);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto batch = lhs_sample(space, 4, seed);
    for (int j = 0; j < 2; ++j) {
      int ones = 0;
      for (const auto& d : batch.designs) ones += d[j];
      CHECK(ones == 2);
    }
  }
}

TEST_CASE("stratification holds over random spaces") {
  auto rng = make_rng(99);
  std::uniform_int_distribution<int> dim_dist(1, 6);
  std::uniform_int_distribution<int> levels_dist(2, 101);
  std::uniform_int_distribution<int> k_dist(2, 12);
  std::uniform_int_distribution<int> kind_dist(0, 1);
  for (int rep = 0; rep < 40; ++rep) {
    std::vector<VariableSpec> vars;
    const int m = dim_dist(rng);
    for (int j = 0; j < m; ++j) {
      if (kind_dist(rng) == 0)
        vars.push_back({VarKind::binary, 2});
      else
        vars.push_back({VarKind::ordinal, levels_dist(rng)});
    }
    const SearchSpace space(vars);
    const int K = k_dist(rng);
    auto batch = lhs_sample(space, K, rng());
    REQUIRE(batch.designs.size() == static_cast<std::size_t>(K));
    for (const auto& d : batch.designs) CHECK(validate_design(space, d).ok);
    CHECK(covers_all_strata(batch, space));
  }
}

TEST_CASE("sampling is deterministic in the seed") {
  const auto space = SearchSpace::ordinal(4, 17);
  auto a = lhs_sample(space, 9, 1234);
  auto b = lhs_sample(space, 9, 1234);
  auto c = lhs_sample(space, 9, 1235);
  CHECK(a.designs == b.designs);
  CHECK(a.designs != c.designs);
}

TEST_CASE("K above the level count duplicates levels at most one apart") {
  const auto space = SearchSpace::binary(1);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto batch = lhs_sample(space, 5, seed);
    int ones = 0;
    for (const auto& d : batch.designs) ones += d[0];
    const int zeros = 5 - ones;
    CHECK(std::abs(ones - zeros) <= 1);
  }
}

TEST_CASE("K below 2 is rejected") {
  CHECK_THROWS(lhs_sample(SearchSpace::binary(3), 1, 0));
}
