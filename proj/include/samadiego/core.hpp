#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

// Shared domain types: search spaces, designs, datasets, run configuration
// and run logs.

namespace samadiego {

enum class Sense { minimize, maximize };

enum class VarKind { binary, ordinal };

struct VariableSpec {
  VarKind kind = VarKind::binary;
  int levels = 2;  // binary => 2

  friend bool operator==(const VariableSpec&, const VariableSpec&) = default;
};

struct SearchSpace {
  std::vector<VariableSpec> variables;

  SearchSpace() = default;
  explicit SearchSpace(std::vector<VariableSpec> vars) : variables(std::move(vars)) {
    if (variables.empty()) throw std::invalid_argument("search space needs at least one variable");
    for (const auto& v : variables) {
      if (v.levels < 2) throw std::invalid_argument("every variable needs at least 2 levels");
      if (v.kind == VarKind::binary && v.levels != 2)
        throw std::invalid_argument("binary variable must have exactly 2 levels");
    }
  }

  static SearchSpace binary(int n) {
    return SearchSpace(std::vector<VariableSpec>(static_cast<std::size_t>(n),
                                                 VariableSpec{VarKind::binary, 2}));
  }
  static SearchSpace ordinal(int n, int levels) {
    return SearchSpace(std::vector<VariableSpec>(static_cast<std::size_t>(n),
                                                 VariableSpec{VarKind::ordinal, levels}));
  }

  int dimension() const { return static_cast<int>(variables.size()); }

  // Product of level counts, saturating at the given cap.
  std::uint64_t cardinality(std::uint64_t cap = UINT64_MAX) const {
    std::uint64_t c = 1;
    for (const auto& v : variables) {
      if (c > cap / static_cast<std::uint64_t>(v.levels)) return cap;
      c *= static_cast<std::uint64_t>(v.levels);
    }
    return c;
  }

  friend bool operator==(const SearchSpace&, const SearchSpace&) = default;
};

// One candidate solution: a vector of 0-based level indices, one per variable.
struct Design {
  std::vector<int> values;

  Design() = default;
  explicit Design(std::vector<int> v) : values(std::move(v)) {}

  int size() const { return static_cast<int>(values.size()); }
  int& operator[](int i) { return values[static_cast<std::size_t>(i)]; }
  int operator[](int i) const { return values[static_cast<std::size_t>(i)]; }
  auto begin() const { return values.begin(); }
  auto end() const { return values.end(); }

  friend bool operator==(const Design&, const Design&) = default;
  friend auto operator<=>(const Design&, const Design&) = default;
};

struct DesignHash {
  std::size_t operator()(const Design& d) const noexcept {
    std::size_t h = 0xcbf29ce484222325ull;
    for (int v : d.values) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

struct ValidationReport {
  bool ok = true;
  int index = -1;  // first offending variable, -1 when ok
  std::string message;
};

// Total check of the Design invariants against a space; never throws.
inline ValidationReport validate_design(const SearchSpace& space, const Design& d) {
  if (d.size() != space.dimension()) {
    return {false, -1,
            "design has " + std::to_string(d.size()) + " values, space has dimension " +
                std::to_string(space.dimension())};
  }
  for (int i = 0; i < d.size(); ++i) {
    const int levels = space.variables[static_cast<std::size_t>(i)].levels;
    if (d[i] < 0 || d[i] >= levels) {
      return {false, i,
              "value " + std::to_string(d[i]) + " at index " + std::to_string(i) +
                  " outside [0, " + std::to_string(levels) + ")"};
    }
  }
  return {};
}

// The engine works in minimize sense; maximization objectives are negated at
// the boundary and un-negated at reporting.
inline double to_minimize(double y, Sense sense) {
  if (!std::isfinite(y)) throw std::invalid_argument("objective value must be finite");
  return sense == Sense::minimize ? y : -y;
}

inline bool improves(double candidate, double incumbent, Sense sense) {
  return sense == Sense::minimize ? candidate < incumbent : candidate > incumbent;
}

// Paired archive of evaluated designs and raw objective values.
struct Dataset {
  std::vector<Design> designs;
  std::vector<double> objectives;  // raw, un-standardized
  Sense sense = Sense::minimize;

  std::size_t size() const { return designs.size(); }

  void append(Design d, double y) {
    if (!std::isfinite(y)) throw std::invalid_argument("objective value must be finite");
    designs.push_back(std::move(d));
    objectives.push_back(y);
  }
};

enum class InfillKind { PV, EI };

inline std::string to_string(InfillKind k) { return k == InfillKind::PV ? "pv" : "ei"; }

struct RunConfig {
  int budget = 500;            // N_max: total real evaluations
  int init_samples = 0;        // K; 0 means pick the problem-kind default
  int parallelism = 7;         // P
  double time_limit_s = 30.0;  // T, verification fit time limit
  InfillKind infill = InfillKind::PV;
  std::uint64_t seed = 0;
  int surrogate_eval_budget = 10000;  // score evaluations per inner MIES search

  void validate() const {
    if (budget < 1) throw std::invalid_argument("budget must be positive");
    if (init_samples >= budget) throw std::invalid_argument("init_samples must be < budget");
    if (parallelism < 1) throw std::invalid_argument("parallelism must be >= 1");
    if (time_limit_s <= 0) throw std::invalid_argument("time limit must be > 0");
  }
};

struct EvalRecord {
  int eval = 0;  // 1-based evaluation index
  Design design;
  double objective = 0;     // raw, in the problem's sense
  double best_so_far = 0;   // raw running best
  std::string model_id;     // empty for initial samples
  double elapsed_s = 0;
  bool pv_fallback = false;  // EI requested on a model without uncertainty
};

namespace detail {

// Shortest round-trippable decimal representation.
inline std::string fmt_double(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, p);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

inline double parse_double(const std::string& s) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw std::runtime_error("bad numeric field: '" + s + "'");
  return v;
}

}  // namespace detail

inline std::string design_to_string(const Design& d) {
  std::string s;
  for (int i = 0; i < d.size(); ++i) {
    if (i) s += '-';
    s += std::to_string(d[i]);
  }
  return s;
}

inline Design design_from_string(const std::string& s) {
  Design d;
  for (const auto& part : detail::split(s, '-'))
    d.values.push_back(static_cast<int>(detail::parse_double(part)));
  return d;
}

// Per-evaluation trace of one optimization run.
struct RunLog {
  std::string problem;
  int dim = 0;
  std::uint64_t seed = 0;
  std::string infill;  // "pv", "ei" or "" for surrogate-free algorithms
  Sense sense = Sense::minimize;

  std::vector<EvalRecord> records;
  Design best_design;
  double best_objective = 0;  // raw, in the problem's sense

  // Appends one evaluation, maintaining the running best.
  void record(Design d, double raw_objective, std::string model_id, double elapsed_s,
              bool pv_fallback = false) {
    const bool first = records.empty();
    if (first || improves(raw_objective, best_objective, sense)) {
      best_objective = raw_objective;
      best_design = d;
    }
    EvalRecord r;
    r.eval = static_cast<int>(records.size()) + 1;
    r.design = std::move(d);
    r.objective = raw_objective;
    r.best_so_far = best_objective;
    r.model_id = std::move(model_id);
    r.elapsed_s = elapsed_s;
    r.pv_fallback = pv_fallback;
    records.push_back(std::move(r));
  }

  // 1-based index of the first evaluation attaining the known optimum; the
  // full budget when it was never reached.
  int evals_to_optimum(std::optional<double> known_optimum) const {
    if (known_optimum) {
      for (const auto& r : records)
        if (std::abs(r.objective - *known_optimum) <= 1e-9) return r.eval;
    }
    return static_cast<int>(records.size());
  }

  void write_csv(std::ostream& os) const {
    os << "eval,design,objective,best_so_far,model_id,elapsed_s\n";
    for (const auto& r : records) {
      os << r.eval << ',' << design_to_string(r.design) << ',' << detail::fmt_double(r.objective)
         << ',' << detail::fmt_double(r.best_so_far) << ',' << r.model_id << ','
         << detail::fmt_double(r.elapsed_s) << '\n';
    }
  }

  static RunLog read_csv(std::istream& is, Sense sense = Sense::minimize) {
    RunLog log;
    log.sense = sense;
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("empty run log");
    if (line != "eval,design,objective,best_so_far,model_id,elapsed_s")
      throw std::runtime_error("unexpected run log header: " + line);
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      auto f = detail::split(line, ',');
      if (f.size() != 6) throw std::runtime_error("malformed run log row: " + line);
      EvalRecord r;
      r.eval = static_cast<int>(detail::parse_double(f[0]));
      r.design = design_from_string(f[1]);
      r.objective = detail::parse_double(f[2]);
      r.best_so_far = detail::parse_double(f[3]);
      r.model_id = f[4];
      r.elapsed_s = detail::parse_double(f[5]);
      log.records.push_back(std::move(r));
    }
    if (!log.records.empty()) {
      const auto* best = &log.records.front();
      for (const auto& r : log.records)
        if (improves(r.objective, best->objective, sense)) best = &r;
      log.best_design = best->design;
      log.best_objective = best->objective;
    }
    return log;
  }

  // {problem, dim, seed, infill, best_objective, evals_to_optimum|null}
  std::string json_summary(std::optional<double> known_optimum) const {
    std::ostringstream os;
    os << "{\"problem\":\"" << problem << "\",\"dim\":" << dim << ",\"seed\":" << seed
       << ",\"infill\":" << (infill.empty() ? "null" : "\"" + infill + "\"")
       << ",\"best_objective\":" << detail::fmt_double(best_objective) << ",\"evals_to_optimum\":";
    bool reached = false;
    if (known_optimum) {
      for (const auto& r : records)
        if (std::abs(r.objective - *known_optimum) <= 1e-9) {
          reached = true;
          break;
        }
    }
    if (reached)
      os << evals_to_optimum(known_optimum);
    else
      os << "null";
    os << "}";
    return os.str();
  }
};

// splitmix64; used to derive independent substream seeds.
inline std::uint64_t mix_seed(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) { return mix_seed(a ^ mix_seed(b)); }

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(mix_seed(seed)); }

}  // namespace samadiego
