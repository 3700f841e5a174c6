#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "samadiego/core.hpp"

// Discrete Latin-hypercube sampling for the initial design.

namespace samadiego {

struct SampleBatch {
  std::vector<Design> designs;
};

// Stratified LHS over level indices: per variable the range [0, levels) is
// split into K equal-width strata, each sample draws uniformly inside its
// stratum (strata assigned by an independent random permutation per
// variable) and the draw is floored to a level index.
inline SampleBatch lhs_sample(const SearchSpace& space, int K, std::uint64_t seed) {
  if (K < 2) throw std::invalid_argument("lhs_sample requires K >= 2");
  auto rng = make_rng(seed);
  const int m = space.dimension();

  std::vector<Design> designs(static_cast<std::size_t>(K));
  for (auto& d : designs) d.values.resize(static_cast<std::size_t>(m));

  std::vector<int> perm(static_cast<std::size_t>(K));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int j = 0; j < m; ++j) {
    const double levels = static_cast<double>(space.variables[static_cast<std::size_t>(j)].levels);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int i = 0; i < K; ++i) {
      const double lo = levels * perm[static_cast<std::size_t>(i)] / K;
      const double hi = levels * (perm[static_cast<std::size_t>(i)] + 1) / K;
      const double draw = lo + (hi - lo) * unit(rng);
      int level = static_cast<int>(draw);
      level = std::clamp(level, 0, static_cast<int>(levels) - 1);
      designs[static_cast<std::size_t>(i)][j] = level;
    }
  }
  return SampleBatch{std::move(designs)};
}

}  // namespace samadiego
