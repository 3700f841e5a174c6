#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "samadiego/surrogates/model.hpp"

// Augmented radial basis function interpolation: kernel weights plus a
// degree-1 polynomial tail, solved as one saddle-point system.

namespace samadiego {

enum class RbfKernel { linear, cubic, tps, poly4, poly5, gauss, mq, imq, iq };

inline RbfKernel rbf_kernel_from_string(const std::string& s) {
  if (s == "linear") return RbfKernel::linear;
  if (s == "cubic") return RbfKernel::cubic;
  if (s == "tps") return RbfKernel::tps;
  if (s == "poly4") return RbfKernel::poly4;
  if (s == "poly5") return RbfKernel::poly5;
  if (s == "gauss") return RbfKernel::gauss;
  if (s == "mq") return RbfKernel::mq;
  if (s == "imq") return RbfKernel::imq;
  if (s == "iq") return RbfKernel::iq;
  throw std::invalid_argument("unknown rbf kernel: " + s);
}

// phi(d) for d >= 0; the log-based bases return 0 at d = 0.
inline double rbf_phi(RbfKernel k, double d, double eps = 1.0) {
  if (d < 0) throw std::invalid_argument("rbf_phi: negative distance");
  switch (k) {
    case RbfKernel::linear: return d;
    case RbfKernel::cubic: return d * d * d;
    case RbfKernel::tps: return d > 0 ? d * d * std::log(d) : 0.0;
    case RbfKernel::poly4: return d > 0 ? d * d * d * d * std::log(d) : 0.0;
    case RbfKernel::poly5: return d * d * d * d * d;
    case RbfKernel::gauss: return std::exp(-(eps * d) * (eps * d));
    case RbfKernel::mq: return std::sqrt(1.0 + (eps * d) * (eps * d));
    case RbfKernel::imq: return 1.0 / std::sqrt(1.0 + (eps * d) * (eps * d));
    case RbfKernel::iq: return 1.0 / (1.0 + (eps * d) * (eps * d));
  }
  return 0.0;
}

inline double rbf_phi(const std::string& kernel, double d, double eps = 1.0) {
  return rbf_phi(rbf_kernel_from_string(kernel), d, eps);
}

namespace detail {

inline Eigen::MatrixXd rbf_apply(RbfKernel k, Eigen::MatrixXd d, double eps) {
  auto a = d.array();
  switch (k) {
    case RbfKernel::linear: break;
    case RbfKernel::cubic: d = (a * a * a).matrix(); break;
    case RbfKernel::tps: d = (a > 0.0).select(a * a * a.log(), 0.0).matrix(); break;
    case RbfKernel::poly4: d = (a > 0.0).select(a * a * a * a * a.log(), 0.0).matrix(); break;
    case RbfKernel::poly5: d = (a * a * a * a * a).matrix(); break;
    case RbfKernel::gauss: d = (-(eps * eps) * a * a).exp().matrix(); break;
    case RbfKernel::mq: d = (1.0 + (eps * eps) * a * a).sqrt().matrix(); break;
    case RbfKernel::imq: d = (1.0 + (eps * eps) * a * a).rsqrt().matrix(); break;
    case RbfKernel::iq: d = (1.0 + (eps * eps) * a * a).inverse().matrix(); break;
  }
  return d;
}

// Euclidean distances between row sets (b x m) and (n x m).
inline Eigen::MatrixXd cross_distances(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  Eigen::MatrixXd d2 = -2.0 * A * B.transpose();
  d2.colwise() += A.rowwise().squaredNorm();
  d2.rowwise() += B.rowwise().squaredNorm().transpose();
  return d2.cwiseMax(0.0).cwiseSqrt();
}

}  // namespace detail

class RbfModel final : public FittedSurrogate {
 public:
  bool supports_uncertainty() const override { return true; }

  static FitResult fit(SurrogateConfig config, const SearchSpace& space,
                       const std::vector<Design>& X, const std::vector<double>& Y) {
    check_fit_preconditions(X, Y);
    const RbfKernel kernel = rbf_kernel_from_string(config.kernel);
    const double eps = config.rbf_epsilon;

    const Eigen::MatrixXd Xs = scale_designs(space, X);
    const Eigen::Index n = Xs.rows();
    const Eigen::Index p = Xs.cols() + 1;
    const Eigen::Index sz = n + p;

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(sz, sz);
    A.topLeftCorner(n, n) = detail::rbf_apply(kernel, detail::cross_distances(Xs, Xs), eps);
    Eigen::MatrixXd P(n, p);
    P.col(0).setOnes();
    P.rightCols(p - 1) = Xs;
    A.topRightCorner(n, p) = P;
    A.bottomLeftCorner(p, n) = P.transpose();

    Eigen::VectorXd b = Eigen::VectorXd::Zero(sz);
    for (Eigen::Index i = 0; i < n; ++i) b(i) = Y[static_cast<std::size_t>(i)];

    const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
    const double tol = 1e-8 * scale;

    // plain solve first, one diagonal jitter retry before giving up
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    Eigen::VectorXd z = lu.solve(b);
    double residual = z.allFinite() ? (A * z - b).cwiseAbs().maxCoeff()
                                    : std::numeric_limits<double>::infinity();
    if (!(residual <= tol)) {
      Eigen::MatrixXd Aj = A;
      Aj.topLeftCorner(n, n).diagonal().array() += 1e-10;
      lu.compute(Aj);
      z = lu.solve(b);
      residual = z.allFinite() ? (A * z - b).cwiseAbs().maxCoeff()
                               : std::numeric_limits<double>::infinity();
      if (!(residual <= tol))
        return FitResult::infeasible("rbf system singular or unstable (residual " +
                                     std::to_string(residual) + ")");
    }

    auto model = std::unique_ptr<RbfModel>(new RbfModel(std::move(config), space, X));
    model->kernel_ = kernel;
    model->eps_ = eps;
    model->phi0_ = rbf_phi(kernel, 0.0, eps);
    model->Xs_ = Xs;
    model->weights_ = z.head(n);
    model->tail_ = z.tail(p);
    model->Ainv_ = lu.inverse();
    return FitResult::ok(std::move(model));
  }

 protected:
  void predict_impl(const PredictBatch& batch, Eigen::VectorXd& mean,
                    Eigen::VectorXd* sd) const override {
    const Eigen::MatrixXd phi =
        detail::rbf_apply(kernel_, detail::cross_distances(batch.scaled, Xs_), eps_);
    mean = phi * weights_;
    mean.array() += tail_(0);
    mean += batch.scaled * tail_.tail(tail_.size() - 1);

    if (sd) {
      // kernel power function reusing the saddle-point factorization:
      // s^2(x) = phi(0) - k(x)^T A^-1 k(x), clamped at zero
      const Eigen::Index bn = batch.scaled.rows();
      Eigen::MatrixXd B(bn, phi.cols() + tail_.size());
      B.leftCols(phi.cols()) = phi;
      B.col(phi.cols()).setOnes();
      B.rightCols(tail_.size() - 1) = batch.scaled;
      const Eigen::MatrixXd S = B * Ainv_;
      const Eigen::ArrayXd s2 = phi0_ - (S.array() * B.array()).rowwise().sum();
      *sd = s2.max(0.0).sqrt().matrix();
    }
  }

 private:
  RbfModel(SurrogateConfig config, const SearchSpace& space, const std::vector<Design>& train)
      : FittedSurrogate(std::move(config), space, train) {}

  RbfKernel kernel_ = RbfKernel::linear;
  double eps_ = 1.0;
  double phi0_ = 0.0;
  Eigen::MatrixXd Xs_;
  Eigen::VectorXd weights_;
  Eigen::VectorXd tail_;
  Eigen::MatrixXd Ainv_;
};

}  // namespace samadiego
