#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "samadiego/core.hpp"

// Benchmark objectives: five pseudo-Boolean maximization problems and a
// small ordinal suite on a 0..100 level grid, plus an exhaustive oracle.

namespace samadiego {

struct Problem {
  std::string name;
  SearchSpace space;
  Sense sense = Sense::maximize;
  std::optional<double> known_optimum;
  std::function<double(const Design&)> fn;

  double evaluate(const Design& d) const {
    auto rep = validate_design(space, d);
    if (!rep.ok) throw std::invalid_argument("invalid design: " + rep.message);
    return fn(d);
  }

  std::string id() const { return name + ":" + std::to_string(space.dimension()); }
};

// ---------------------------------------------------------------------------
// Pseudo-Boolean problems
// ---------------------------------------------------------------------------

// Merit factor n^2 / (2E) of the +-1 sequence; E is the autocorrelation
// energy. E >= 1 always holds since C_{n-1} = s_1 * s_n is +-1.
inline double labs_value(const Design& bits) {
  const int n = bits.size();
  if (n < 2) throw std::invalid_argument("labs requires n >= 2");
  double energy = 0.0;
  for (int k = 1; k < n; ++k) {
    long long c = 0;
    for (int i = 0; i + k < n; ++i) {
      const int si = 2 * bits[i] - 1;
      const int sk = 2 * bits[i + k] - 1;
      c += si * sk;
    }
    energy += static_cast<double>(c) * static_cast<double>(c);
  }
  return static_cast<double>(n) * static_cast<double>(n) / (2.0 * energy);
}

// Number of agreeing neighbor pairs on the 1-D ring; maximum = n.
inline double ising_ring_value(const Design& bits) {
  const int n = bits.size();
  if (n < 3) throw std::invalid_argument("ising_ring requires n >= 3");
  int agree = 0;
  for (int i = 0; i < n; ++i) {
    const int a = bits[i];
    const int b = bits[(i + 1) % n];
    agree += a * b + (1 - a) * (1 - b);
  }
  return static_cast<double>(agree);
}

inline int isqrt_exact(int n) {
  const int k = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  if (k * k != n) throw std::invalid_argument("dimension must be a perfect square");
  return k;
}

// Agreement count over the 2n edges (right and down neighbors, wrapping) of
// the k x k torus; maximum = 2n.
inline double ising_torus_value(const Design& bits) {
  const int n = bits.size();
  const int k = isqrt_exact(n);
  if (k < 2) throw std::invalid_argument("ising_torus requires k >= 2");
  int agree = 0;
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) {
      const int a = bits[r * k + c];
      const int right = bits[r * k + (c + 1) % k];
      const int down = bits[((r + 1) % k) * k + c];
      agree += a * right + (1 - a) * (1 - right);
      agree += a * down + (1 - a) * (1 - down);
    }
  }
  return static_cast<double>(agree);
}

// Penalized independent-set instance: |S| minus penalty per edge inside S.
struct MivsInstance {
  int n = 0;                                // variables consumed by the encoding
  int active = 0;                           // vertices that actually take part
  std::vector<std::pair<int, int>> edges;   // 0-based vertex pairs
  double penalty = 0;
};

// The reference PBO instance graph: two vertex paths broken at the midpoint
// plus two families of cross edges. An odd trailing variable is inert.
inline MivsInstance mivs_instance(int n) {
  if (n < 4) throw std::invalid_argument("mivs requires n >= 4");
  MivsInstance inst;
  inst.n = n;
  inst.active = n - n % 2;
  const int ne = inst.active;
  const int half = ne / 2;
  auto is_edge = [&](int i, int j) {  // 1-based, i < j
    if (i != half && j == i + 1) return true;
    if (i <= half - 1 && j == i + half + 1) return true;
    if (i <= half && j == i + half - 1) return true;
    return false;
  };
  for (int i = 1; i <= ne; ++i)
    for (int j = i + 1; j <= ne; ++j)
      if (is_edge(i, j)) inst.edges.emplace_back(i - 1, j - 1);
  inst.penalty = static_cast<double>(ne);
  return inst;
}

inline double mivs_value(const MivsInstance& inst, const Design& bits) {
  if (bits.size() != inst.n) throw std::invalid_argument("mivs: wrong design length");
  int selected = 0;
  for (int i = 0; i < inst.active; ++i) selected += bits[i];
  int violated = 0;
  for (const auto& [u, v] : inst.edges)
    if (bits[u] && bits[v]) ++violated;
  return static_cast<double>(selected) - inst.penalty * static_cast<double>(violated);
}

// N-queens as penalized maximization: queens placed at set bits; every line
// (row, column, diagonal, anti-diagonal) holding q > 1 queens costs k*(q-1).
inline double nqp_value(const Design& bits) {
  const int n = bits.size();
  const int k = isqrt_exact(n);
  int queens = 0;
  for (int i = 0; i < n; ++i) queens += bits[i];
  double over = 0;
  for (int r = 0; r < k; ++r) {
    int q = 0;
    for (int c = 0; c < k; ++c) q += bits[r * k + c];
    over += std::max(0, q - 1);
  }
  for (int c = 0; c < k; ++c) {
    int q = 0;
    for (int r = 0; r < k; ++r) q += bits[r * k + c];
    over += std::max(0, q - 1);
  }
  for (int d = -(k - 1); d <= k - 1; ++d) {  // r - c = d
    int q = 0;
    for (int r = 0; r < k; ++r) {
      const int c = r - d;
      if (c >= 0 && c < k) q += bits[r * k + c];
    }
    over += std::max(0, q - 1);
  }
  for (int s = 0; s <= 2 * (k - 1); ++s) {  // r + c = s
    int q = 0;
    for (int r = 0; r < k; ++r) {
      const int c = s - r;
      if (c >= 0 && c < k) q += bits[r * k + c];
    }
    over += std::max(0, q - 1);
  }
  return static_cast<double>(queens) - static_cast<double>(k) * over;
}

// ---------------------------------------------------------------------------
// Ordinal problems on the 0..100 grid, decoded linearly into [-5, 5]
// ---------------------------------------------------------------------------

inline std::vector<double> decode_grid(const Design& d) {
  std::vector<double> z(static_cast<std::size_t>(d.size()));
  for (int i = 0; i < d.size(); ++i) z[static_cast<std::size_t>(i)] = -5.0 + 10.0 * d[i] / 100.0;
  return z;
}

inline double sphere_value(const Design& d) {
  double s = 0;
  for (double z : decode_grid(d)) s += z * z;
  return s;
}

inline double rosenbrock_value(const Design& d) {
  const auto z = decode_grid(d);
  double s = 0;
  for (std::size_t i = 0; i + 1 < z.size(); ++i) {
    const double a = z[i + 1] - z[i] * z[i];
    const double b = z[i] - 1.0;
    s += 100.0 * a * a + b * b;
  }
  return s;
}

inline double rastrigin_value(const Design& d) {
  const auto z = decode_grid(d);
  double s = 10.0 * static_cast<double>(z.size());
  for (double zi : z) s += zi * zi - 10.0 * std::cos(2.0 * std::numbers::pi * zi);
  return s;
}

// ---------------------------------------------------------------------------
// Constructors and the registry
// ---------------------------------------------------------------------------

inline Problem make_labs(int n) {
  if (n < 2) throw std::invalid_argument("labs requires n >= 2");
  return {"labs", SearchSpace::binary(n), Sense::maximize, std::nullopt, labs_value};
}

inline Problem make_ising_ring(int n) {
  if (n < 3) throw std::invalid_argument("ising1d requires n >= 3");
  return {"ising1d", SearchSpace::binary(n), Sense::maximize, static_cast<double>(n),
          ising_ring_value};
}

inline Problem make_ising_torus(int n) {
  isqrt_exact(n);
  return {"ising2d", SearchSpace::binary(n), Sense::maximize, static_cast<double>(2 * n),
          ising_torus_value};
}

inline Problem make_mivs(int n) {
  auto inst = mivs_instance(n);
  // Only the 25-dimensional optimum is pinned (validated by enumeration).
  std::optional<double> opt;
  if (n == 25) opt = 12.0;
  return {"mivs", SearchSpace::binary(n), Sense::maximize, opt,
          [inst = std::move(inst)](const Design& d) { return mivs_value(inst, d); }};
}

// Generic penalized independent set on an explicit graph (test instances).
inline Problem make_independent_set(int n, std::vector<std::pair<int, int>> edges, double penalty,
                                    std::optional<double> opt = std::nullopt) {
  MivsInstance inst;
  inst.n = n;
  inst.active = n;
  inst.edges = std::move(edges);
  inst.penalty = penalty;
  return {"independent_set", SearchSpace::binary(n), Sense::maximize, opt,
          [inst = std::move(inst)](const Design& d) { return mivs_value(inst, d); }};
}

inline Problem make_nqp(int n) {
  const int k = isqrt_exact(n);
  return {"nqp", SearchSpace::binary(n), Sense::maximize, static_cast<double>(k), nqp_value};
}

inline Problem make_ordinal(const std::string& name, int m) {
  if (m < 2) throw std::invalid_argument("ordinal problems require m >= 2");
  const SearchSpace space = SearchSpace::ordinal(m, 101);
  if (name == "sphere") return {"sphere", space, Sense::minimize, 0.0, sphere_value};
  if (name == "rosenbrock") return {"rosenbrock", space, Sense::minimize, 0.0, rosenbrock_value};
  if (name == "rastrigin") return {"rastrigin", space, Sense::minimize, 0.0, rastrigin_value};
  throw std::invalid_argument("unknown ordinal problem: " + name);
}

// Resolves "name:dim" identifiers, e.g. "ising2d:25".
inline Problem make_problem(const std::string& name, int dim) {
  if (name == "labs") return make_labs(dim);
  if (name == "ising1d") return make_ising_ring(dim);
  if (name == "ising2d") return make_ising_torus(dim);
  if (name == "mivs") return make_mivs(dim);
  if (name == "nqp") return make_nqp(dim);
  if (name == "sphere" || name == "rosenbrock" || name == "rastrigin")
    return make_ordinal(name, dim);
  throw std::invalid_argument("unknown problem: " + name);
}

inline Problem make_problem(const std::string& spec) {
  auto parts = detail::split(spec, ':');
  if (parts.size() != 2) throw std::invalid_argument("expected <name>:<dim>, got: " + spec);
  return make_problem(parts[0], static_cast<int>(detail::parse_double(parts[1])));
}

// ---------------------------------------------------------------------------
// Exhaustive oracle
// ---------------------------------------------------------------------------

struct BruteForceResult {
  Design best;
  double value = 0;
};

// Exact optimum by full enumeration; refuses spaces larger than the cap.
inline BruteForceResult brute_force_optimum(const Problem& p,
                                            std::uint64_t cap = (1ull << 25)) {
  const auto card = p.space.cardinality(cap + 1);
  if (card > cap) throw std::invalid_argument("search space too large to enumerate");
  const int m = p.space.dimension();

  Design d(std::vector<int>(static_cast<std::size_t>(m), 0));
  BruteForceResult best{d, p.evaluate(d)};
  for (std::uint64_t it = 1; it < card; ++it) {
    int j = 0;
    while (true) {
      if (++d[j] < p.space.variables[static_cast<std::size_t>(j)].levels) break;
      d[j] = 0;
      ++j;
    }
    const double v = p.fn(d);
    if (improves(v, best.value, p.sense)) {
      best.best = d;
      best.value = v;
    }
  }
  return best;
}

}  // namespace samadiego
