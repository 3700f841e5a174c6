#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "samadiego/surrogates/model.hpp"

// Bagged regression trees; the prediction is the tree mean and the
// uncertainty is the spread of the individual tree predictions.

namespace samadiego {

class ForestModel final : public FittedSurrogate {
 public:
  bool supports_uncertainty() const override { return true; }

  static FitResult fit(SurrogateConfig config, const SearchSpace& space,
                       const std::vector<Design>& X, const std::vector<double>& Y,
                       std::uint64_t seed) {
    check_fit_preconditions(X, Y);
    auto model = std::unique_ptr<ForestModel>(new ForestModel(std::move(config), space, X));
    model->min_leaf_ = model->config().forest_min_leaf;
    const Eigen::MatrixXd Xs = scale_designs(space, X);
    const int n = static_cast<int>(Xs.rows());
    const int m = static_cast<int>(Xs.cols());
    const int mtry = (m + 2) / 3;  // ceil(m / 3)

    auto rng = make_rng(mix_seed(seed, 0x0f0e57ull));
    std::uniform_int_distribution<int> pick(0, n - 1);
    model->trees_.resize(static_cast<std::size_t>(model->config().forest_trees));
    std::vector<int> indices(static_cast<std::size_t>(n));
    for (auto& tree : model->trees_) {
      for (auto& ix : indices) ix = pick(rng);
      Builder builder{Xs, Y, model->min_leaf_, mtry, rng, tree};
      builder.grow(indices);
    }
    return FitResult::ok(std::move(model));
  }

 protected:
  void predict_impl(const PredictBatch& batch, Eigen::VectorXd& mean,
                    Eigen::VectorXd* sd) const override {
    const Eigen::Index b = batch.scaled.rows();
    const double t = static_cast<double>(trees_.size());
    for (Eigen::Index i = 0; i < b; ++i) {
      double sum = 0, sum2 = 0;
      for (const auto& tree : trees_) {
        const double p = tree.predict(batch.scaled.row(i));
        sum += p;
        sum2 += p * p;
      }
      mean(i) = sum / t;
      if (sd) (*sd)(i) = std::sqrt(std::max(0.0, sum2 / t - (sum / t) * (sum / t)));
    }
  }

 private:
  ForestModel(SurrogateConfig config, const SearchSpace& space, const std::vector<Design>& train)
      : FittedSurrogate(std::move(config), space, train) {}

  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0;
    int left = -1, right = -1;
    double value = 0;
  };

  struct Tree {
    std::vector<Node> nodes;

    double predict(const Eigen::RowVectorXd& x) const {
      int at = 0;
      while (nodes[static_cast<std::size_t>(at)].feature >= 0) {
        const auto& nd = nodes[static_cast<std::size_t>(at)];
        at = x(nd.feature) <= nd.threshold ? nd.left : nd.right;
      }
      return nodes[static_cast<std::size_t>(at)].value;
    }
  };

  struct Builder {
    const Eigen::MatrixXd& Xs;
    const std::vector<double>& Y;
    int min_leaf;
    int mtry;
    std::mt19937_64& rng;
    Tree& tree;
    std::vector<int> feature_order;

    void grow(std::vector<int>& indices) {
      tree.nodes.clear();
      feature_order.resize(static_cast<std::size_t>(Xs.cols()));
      std::iota(feature_order.begin(), feature_order.end(), 0);
      build(indices);
    }

    int build(std::vector<int>& indices) {
      const int id = static_cast<int>(tree.nodes.size());
      tree.nodes.emplace_back();

      double sum = 0;
      for (int ix : indices) sum += Y[static_cast<std::size_t>(ix)];
      const double mean = sum / static_cast<double>(indices.size());
      tree.nodes[static_cast<std::size_t>(id)].value = mean;

      if (static_cast<int>(indices.size()) < 2 * min_leaf) return id;
      bool constant = true;
      for (int ix : indices)
        if (Y[static_cast<std::size_t>(ix)] != Y[static_cast<std::size_t>(indices[0])]) {
          constant = false;
          break;
        }
      if (constant) return id;

      // best variance-reduction split over a random feature subset
      int best_feature = -1;
      double best_threshold = 0, best_score = -1;
      std::shuffle(feature_order.begin(), feature_order.end(), rng);
      std::vector<std::pair<double, double>> vals;
      for (int fi = 0; fi < mtry; ++fi) {
        const int f = feature_order[static_cast<std::size_t>(fi)];
        vals.clear();
        for (int ix : indices)
          vals.emplace_back(Xs(ix, f), Y[static_cast<std::size_t>(ix)]);
        std::sort(vals.begin(), vals.end());
        double left_sum = 0;
        const double total = sum;
        const int n = static_cast<int>(vals.size());
        for (int i = 0; i + 1 < n; ++i) {
          left_sum += vals[static_cast<std::size_t>(i)].second;
          if (vals[static_cast<std::size_t>(i)].first ==
              vals[static_cast<std::size_t>(i + 1)].first)
            continue;
          const int nl = i + 1, nr = n - nl;
          if (nl < min_leaf || nr < min_leaf) continue;
          const double right_sum = total - left_sum;
          const double score = left_sum * left_sum / nl + right_sum * right_sum / nr;
          if (score > best_score) {
            best_score = score;
            best_feature = f;
            best_threshold = 0.5 * (vals[static_cast<std::size_t>(i)].first +
                                    vals[static_cast<std::size_t>(i + 1)].first);
          }
        }
      }
      if (best_feature < 0) return id;

      std::vector<int> left, right;
      for (int ix : indices) {
        (Xs(ix, best_feature) <= best_threshold ? left : right).push_back(ix);
      }
      tree.nodes[static_cast<std::size_t>(id)].feature = best_feature;
      tree.nodes[static_cast<std::size_t>(id)].threshold = best_threshold;
      const int l = build(left);
      tree.nodes[static_cast<std::size_t>(id)].left = l;
      const int r = build(right);
      tree.nodes[static_cast<std::size_t>(id)].right = r;
      return id;
    }
  };

  int min_leaf_ = 2;
  std::vector<Tree> trees_;
};

}  // namespace samadiego
