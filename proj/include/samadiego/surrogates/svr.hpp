#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "samadiego/surrogates/model.hpp"

// Epsilon-SVR solved in the beta = alpha - alpha* formulation by pairwise
// dual coordinate ascent under the sum-zero constraint and |beta| <= C box.

namespace samadiego {

enum class SvrKernel { linear, rbf, sigmoid, poly2, poly3, poly5 };

inline SvrKernel svr_kernel_from_string(const std::string& s) {
  if (s == "linear") return SvrKernel::linear;
  if (s == "rbf") return SvrKernel::rbf;
  if (s == "sigmoid") return SvrKernel::sigmoid;
  if (s == "poly2") return SvrKernel::poly2;
  if (s == "poly3") return SvrKernel::poly3;
  if (s == "poly5") return SvrKernel::poly5;
  throw std::invalid_argument("unknown svr kernel: " + s);
}

class SvrModel final : public FittedSurrogate {
 public:
  bool supports_uncertainty() const override { return false; }

  static FitResult fit(SurrogateConfig config, const SearchSpace& space,
                       const std::vector<Design>& X, const std::vector<double>& Y) {
    check_fit_preconditions(X, Y);
    const SvrKernel kernel = svr_kernel_from_string(config.kernel);
    const double C = config.svr_c;
    const double eps = config.svr_epsilon;

    const Eigen::MatrixXd Xs = scale_designs(space, X);
    const Eigen::Index n = Xs.rows();
    const double gamma = 1.0 / static_cast<double>(Xs.cols());
    const Eigen::MatrixXd K = gram(kernel, gamma, Xs, Xs);
    const Eigen::VectorXd y =
        Eigen::Map<const Eigen::VectorXd>(Y.data(), static_cast<Eigen::Index>(Y.size()));

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd g = y;  // y - K * beta

    // deterministic pair sweeps: for each i, step with the point whose
    // residual differs most
    const int max_sweeps = 200;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
      double sweep_gain = 0;
      for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index j = i;
        double spread = -1;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double s = std::abs(g(i) - g(k));
          if (k != i && s > spread) {
            spread = s;
            j = k;
          }
        }
        if (j == i) continue;
        sweep_gain += pair_step(K, beta, g, C, eps, i, j);
      }
      if (sweep_gain < 1e-12) break;
    }
    if (!beta.allFinite()) return FitResult::infeasible("svr: solver diverged");

    // intercept from the KKT intervals
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    double free_sum = 0;
    int free_count = 0;
    const double edge = 1e-9 * C;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double b_at = beta(i) > 0 ? g(i) - eps : g(i) + eps;
      if (std::abs(beta(i)) > edge && std::abs(beta(i)) < C - edge) {
        free_sum += b_at;
        ++free_count;
      } else if (std::abs(beta(i)) <= edge) {
        lo = std::max(lo, g(i) - eps);
        hi = std::min(hi, g(i) + eps);
      } else if (beta(i) >= C - edge) {
        hi = std::min(hi, g(i) - eps);
      } else {
        lo = std::max(lo, g(i) + eps);
      }
    }
    double b = 0;
    if (free_count > 0) {
      b = free_sum / free_count;
    } else if (std::isfinite(lo) && std::isfinite(hi)) {
      b = 0.5 * (lo + hi);
    } else if (std::isfinite(lo)) {
      b = lo;
    } else if (std::isfinite(hi)) {
      b = hi;
    }
    if (!std::isfinite(b)) return FitResult::infeasible("svr: intercept undetermined");

    auto model = std::unique_ptr<SvrModel>(new SvrModel(std::move(config), space, X));
    model->kernel_ = kernel;
    model->gamma_ = gamma;
    model->Xs_ = Xs;
    model->beta_ = beta;
    model->b_ = b;
    return FitResult::ok(std::move(model));
  }

 protected:
  void predict_impl(const PredictBatch& batch, Eigen::VectorXd& mean,
                    Eigen::VectorXd* sd) const override {
    mean = gram(kernel_, gamma_, batch.scaled, Xs_) * beta_;
    mean.array() += b_;
    if (sd) throw std::logic_error("svr has no uncertainty estimate");
  }

 private:
  SvrModel(SurrogateConfig config, const SearchSpace& space, const std::vector<Design>& train)
      : FittedSurrogate(std::move(config), space, train) {}

  static Eigen::MatrixXd gram(SvrKernel k, double gamma, const Eigen::MatrixXd& A,
                              const Eigen::MatrixXd& B) {
    switch (k) {
      case SvrKernel::linear: return A * B.transpose();
      case SvrKernel::rbf: {
        Eigen::MatrixXd d2 = -2.0 * A * B.transpose();
        d2.colwise() += A.rowwise().squaredNorm();
        d2.rowwise() += B.rowwise().squaredNorm().transpose();
        return (-gamma * d2.array().max(0.0)).exp().matrix();
      }
      case SvrKernel::sigmoid: return (gamma * (A * B.transpose()).array()).tanh().matrix();
      case SvrKernel::poly2: return (gamma * (A * B.transpose()).array()).square().matrix();
      case SvrKernel::poly3: return (gamma * (A * B.transpose()).array()).cube().matrix();
      case SvrKernel::poly5: {
        const Eigen::ArrayXXd u = gamma * (A * B.transpose()).array();
        return (u.square() * u.cube()).matrix();
      }
    }
    throw std::logic_error("unreachable");
  }

  // One analytic step on (beta_i, beta_j) keeping the sum fixed; returns the
  // achieved dual gain.
  static double pair_step(const Eigen::MatrixXd& K, Eigen::VectorXd& beta, Eigen::VectorXd& g,
                          double C, double eps, Eigen::Index i, Eigen::Index j) {
    const double eta = K(i, i) + K(j, j) - 2.0 * K(i, j);
    const double lo = std::max(-C - beta(i), beta(j) - C);
    const double hi = std::min(C - beta(i), beta(j) + C);
    if (!(hi > lo)) return 0;

    const double slope0 = g(i) - g(j);
    auto gain = [&](double d) {
      return -0.5 * eta * d * d + slope0 * d - eps * (std::abs(beta(i) + d) - std::abs(beta(i))) -
             eps * (std::abs(beta(j) - d) - std::abs(beta(j)));
    };

    // candidate steps: box ends, kinks, and the stationary point of each
    // sign regime
    double cand[8];
    int nc = 0;
    cand[nc++] = lo;
    cand[nc++] = hi;
    if (-beta(i) > lo && -beta(i) < hi) cand[nc++] = -beta(i);
    if (beta(j) > lo && beta(j) < hi) cand[nc++] = beta(j);
    if (eta > 1e-12) {
      for (double si : {-1.0, 1.0})
        for (double sj : {-1.0, 1.0}) {
          const double d = (slope0 - eps * si + eps * sj) / eta;
          if (d > lo && d < hi) cand[nc++] = d;
        }
    }

    double best_d = 0, best_gain = 0;
    for (int c = 0; c < nc; ++c) {
      const double v = gain(cand[c]);
      if (v > best_gain) {
        best_gain = v;
        best_d = cand[c];
      }
    }
    if (best_gain <= 1e-14) return 0;

    beta(i) += best_d;
    beta(j) -= best_d;
    g -= best_d * (K.col(i) - K.col(j));
    return best_gain;
  }

  SvrKernel kernel_ = SvrKernel::linear;
  double gamma_ = 1.0;
  Eigen::MatrixXd Xs_;
  Eigen::VectorXd beta_;
  double b_ = 0;
};

}  // namespace samadiego
