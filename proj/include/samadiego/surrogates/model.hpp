#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "samadiego/core.hpp"

// The common fit/predict/uncertainty contract of the surrogate pool.

namespace samadiego {

enum class SurrogateFamily { rbf, kriging, forest, svr };

struct SurrogateConfig {
  SurrogateFamily family = SurrogateFamily::rbf;
  std::string kernel;  // rbf basis / kriging correlation / svr kernel
  std::string trend;   // kriging only: const | linear | quad

  // fixed hyperparameters ("not specifically tuned")
  double rbf_epsilon = 1.0;  // shape parameter of gauss/mq/imq/iq bases
  double svr_c = 1.0;
  double svr_epsilon = 0.1;
  int forest_trees = 100;
  int forest_min_leaf = 2;

  std::string id() const {
    switch (family) {
      case SurrogateFamily::rbf: return "rbf:" + kernel;
      case SurrogateFamily::kriging: return "kriging:" + kernel + ":" + trend;
      case SurrogateFamily::forest: return "forest";
      case SurrogateFamily::svr: return "svr:" + kernel;
    }
    return "?";
  }
};

// Levels mapped to [0,1] so distances are comparable across binary and
// many-level ordinal variables.
inline Eigen::RowVectorXd scale_design(const SearchSpace& space, const Design& d) {
  const int m = space.dimension();
  Eigen::RowVectorXd row(m);
  for (int j = 0; j < m; ++j)
    row(j) = static_cast<double>(d[j]) / (space.variables[static_cast<std::size_t>(j)].levels - 1);
  return row;
}

inline Eigen::MatrixXd scale_designs(const SearchSpace& space, const std::vector<Design>& ds) {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(ds.size()), space.dimension());
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    X.row(i) = scale_design(space, ds[static_cast<std::size_t>(i)]);
  return X;
}

// Candidate batch as seen by a model: scaled coordinates plus the raw
// integer designs for models that work on level differences directly.
struct PredictBatch {
  Eigen::MatrixXd scaled;                  // b x m
  const std::vector<Design>* designs = nullptr;  // optional raw view, size b
};

class FittedSurrogate {
 public:
  virtual ~FittedSurrogate() = default;

  const SurrogateConfig& config() const { return config_; }
  const SearchSpace& space() const { return space_; }
  virtual bool supports_uncertainty() const = 0;

  double predict(const Design& d) const {
    check(d);
    Eigen::VectorXd mean(1);
    PredictBatch batch{scale_design(space_, d), nullptr};
    predict_impl(batch, mean, nullptr);
    return mean(0);
  }

  std::pair<double, double> predict_with_uncertainty(const Design& d) const {
    if (!supports_uncertainty())
      throw std::logic_error("model " + config_.id() + " has no uncertainty estimate");
    check(d);
    Eigen::VectorXd mean(1), sd(1);
    PredictBatch batch{scale_design(space_, d), nullptr};
    predict_impl(batch, mean, &sd);
    if (training_set_.contains(d)) sd(0) = 0.0;  // interpolators: exact revisit
    return {mean(0), std::max(0.0, sd(0))};
  }

  // Batched evaluation; sd may be null (and must be for models without
  // uncertainty support).
  void predict_many(const std::vector<Design>& ds, Eigen::VectorXd& mean,
                    Eigen::VectorXd* sd) const {
    if (sd && !supports_uncertainty())
      throw std::logic_error("model " + config_.id() + " has no uncertainty estimate");
    PredictBatch batch{scale_designs(space_, ds), &ds};
    mean.resize(static_cast<Eigen::Index>(ds.size()));
    if (sd) sd->resize(static_cast<Eigen::Index>(ds.size()));
    predict_impl(batch, mean, sd);
    if (sd) {
      for (Eigen::Index i = 0; i < sd->size(); ++i) {
        double& v = (*sd)(i);
        v = std::max(0.0, v);
        if (training_set_.contains(ds[static_cast<std::size_t>(i)])) v = 0.0;
      }
    }
  }

 protected:
  FittedSurrogate(SurrogateConfig config, const SearchSpace& space,
                  const std::vector<Design>& train)
      : config_(std::move(config)), space_(space), training_set_(train.begin(), train.end()) {}

  virtual void predict_impl(const PredictBatch& batch, Eigen::VectorXd& mean,
                            Eigen::VectorXd* sd) const = 0;

 private:
  void check(const Design& d) const {
    auto rep = validate_design(space_, d);
    if (!rep.ok) throw std::invalid_argument("invalid design for predict: " + rep.message);
  }

  SurrogateConfig config_;
  SearchSpace space_;
  std::unordered_set<Design, DesignHash> training_set_;
};

// Infeasibility (singular system, non-convergence) is a verdict, not a crash.
struct FitResult {
  std::unique_ptr<FittedSurrogate> model;
  std::string infeasible_reason;

  bool feasible() const { return model != nullptr; }
  static FitResult infeasible(std::string why) { return {nullptr, std::move(why)}; }
  static FitResult ok(std::unique_ptr<FittedSurrogate> m) { return {std::move(m), {}}; }
};

struct KrigingDistances;

// Optional warm-start and shared scratch carried between refits on one
// archive snapshot.
struct FitHints {
  std::optional<double> kriging_theta;
  std::shared_ptr<const KrigingDistances> kriging_cache;
};

inline void check_fit_preconditions(const std::vector<Design>& X, const std::vector<double>& Y) {
  if (X.size() != Y.size()) throw std::invalid_argument("fit: |X| != |Y|");
  if (X.size() < 2) throw std::invalid_argument("fit: need at least 2 samples");
}

// 1 - SS_res / SS_tot about the mean of y_true.
inline double r2_score(const std::vector<double>& y_true, const std::vector<double>& y_pred) {
  if (y_true.size() != y_pred.size()) throw std::invalid_argument("r2_score: length mismatch");
  if (y_true.size() < 2) throw std::invalid_argument("r2_score: need at least 2 points");
  double mean = 0;
  for (double y : y_true) mean += y;
  mean /= static_cast<double>(y_true.size());
  double ss_tot = 0, ss_res = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    ss_tot += (y_true[i] - mean) * (y_true[i] - mean);
    ss_res += (y_true[i] - y_pred[i]) * (y_true[i] - y_pred[i]);
  }
  if (ss_tot == 0) throw std::invalid_argument("r2_score: constant y_true has no variance");
  return 1.0 - ss_res / ss_tot;
}

}  // namespace samadiego
