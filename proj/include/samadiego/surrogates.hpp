#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "samadiego/surrogates/forest.hpp"
#include "samadiego/surrogates/kriging.hpp"
#include "samadiego/surrogates/model.hpp"
#include "samadiego/surrogates/rbf.hpp"
#include "samadiego/surrogates/svr.hpp"

namespace samadiego {

// The candidate pool: 9 RBFn + 15 Kriging + 1 RF + 6 SVR = 31 models.
inline std::vector<SurrogateConfig> full_pool() {
  std::vector<SurrogateConfig> pool;
  for (const char* k : {"linear", "cubic", "tps", "poly4", "poly5", "gauss", "mq", "imq", "iq"})
    pool.push_back({SurrogateFamily::rbf, k, ""});
  for (const char* c : {"ou", "sqexp", "matern32", "matern52", "gower"})
    for (const char* t : {"const", "linear", "quad"})
      pool.push_back({SurrogateFamily::kriging, c, t});
  pool.push_back({SurrogateFamily::forest, "", ""});
  for (const char* k : {"linear", "rbf", "sigmoid", "poly2", "poly3", "poly5"})
    pool.push_back({SurrogateFamily::svr, k, ""});
  return pool;
}

inline SurrogateConfig config_from_id(const std::string& id) {
  for (auto& c : full_pool())
    if (c.id() == id) return c;
  throw std::invalid_argument("unknown surrogate id: " + id);
}

// Fits one configuration; numerical failure comes back as an infeasible
// verdict, precondition violations throw.
inline FitResult fit(SurrogateConfig config, const SearchSpace& space,
                     const std::vector<Design>& X, const std::vector<double>& Y,
                     std::uint64_t seed = 0, const FitHints* hints = nullptr) {
  check_fit_preconditions(X, Y);
  try {
    switch (config.family) {
      case SurrogateFamily::rbf: return RbfModel::fit(std::move(config), space, X, Y);
      case SurrogateFamily::kriging:
        return KrigingModel::fit(std::move(config), space, X, Y, hints);
      case SurrogateFamily::forest:
        return ForestModel::fit(std::move(config), space, X, Y, seed);
      case SurrogateFamily::svr: return SvrModel::fit(std::move(config), space, X, Y);
    }
  } catch (const std::bad_alloc&) {
    throw;
  } catch (const std::invalid_argument&) {
    throw;  // precondition and configuration errors are real errors
  } catch (const std::exception& e) {
    return FitResult::infeasible(std::string("fit failed: ") + e.what());
  }
  throw std::logic_error("unreachable");
}

}  // namespace samadiego
