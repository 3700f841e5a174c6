#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "samadiego/surrogates/model.hpp"

// Universal Kriging on level indices scaled to [0,1], with product-form
// correlations and a concentrated-log-likelihood search for one shared
// length scale.

namespace samadiego {

enum class KrigingCorr { ou, sqexp, matern32, matern52, gower };
enum class KrigingTrend { constant, linear, quad };

inline KrigingCorr kriging_corr_from_string(const std::string& s) {
  if (s == "ou") return KrigingCorr::ou;
  if (s == "sqexp") return KrigingCorr::sqexp;
  if (s == "matern32") return KrigingCorr::matern32;
  if (s == "matern52") return KrigingCorr::matern52;
  if (s == "gower") return KrigingCorr::gower;
  throw std::invalid_argument("unknown kriging correlation: " + s);
}

inline KrigingTrend kriging_trend_from_string(const std::string& s) {
  if (s == "const") return KrigingTrend::constant;
  if (s == "linear") return KrigingTrend::linear;
  if (s == "quad") return KrigingTrend::quad;
  throw std::invalid_argument("unknown kriging trend: " + s);
}

// Correlation between two designs with per-variable length scales. Distances
// are taken on levels scaled to [0,1]; the Gower variant applies a squared-
// Gaussian to the mean per-coordinate distance.
inline double kriging_corr(KrigingCorr kind, const SearchSpace& space, const Design& a,
                           const Design& b, const std::vector<double>& theta) {
  const int m = space.dimension();
  if (static_cast<int>(theta.size()) != m)
    throw std::invalid_argument("kriging_corr: theta size mismatch");
  for (double t : theta)
    if (!(t > 0)) throw std::invalid_argument("kriging_corr: theta must be positive");
  if (a.size() != m || b.size() != m) throw std::invalid_argument("kriging_corr: bad design");

  static constexpr double kSqrt3 = 1.7320508075688772;
  static constexpr double kSqrt5 = 2.23606797749979;

  double acc = 0.0;
  for (int j = 0; j < m; ++j) {
    const double range = space.variables[static_cast<std::size_t>(j)].levels - 1.0;
    const double d = std::abs(a[j] - b[j]) / range;
    const double t = theta[static_cast<std::size_t>(j)];
    switch (kind) {
      case KrigingCorr::ou: acc += t * d; break;
      case KrigingCorr::sqexp: acc += t * d * d; break;
      case KrigingCorr::matern32: {
        const double u = kSqrt3 * t * d;
        acc += u - std::log1p(u);
        break;
      }
      case KrigingCorr::matern52: {
        const double u = kSqrt5 * t * d;
        acc += u - std::log1p(u + u * u / 3.0);
        break;
      }
      case KrigingCorr::gower: acc += d; break;
    }
  }
  if (kind == KrigingCorr::gower) {
    const double dg = acc / m;
    return std::exp(-theta[0] * dg * dg);
  }
  return std::exp(-acc);
}

inline double kriging_corr(const std::string& kind, const SearchSpace& space, const Design& a,
                           const Design& b, const std::vector<double>& theta) {
  return kriging_corr(kriging_corr_from_string(kind), space, a, b, theta);
}

// Pairwise level-difference summaries shared by all Kriging fits on one
// archive snapshot; building it once per iteration keeps refits cheap.
struct KrigingDistances {
  Eigen::MatrixXd s1;  // sum_j scaled |delta_j|
  Eigen::MatrixXd s2;  // sum_j scaled delta_j^2
  std::vector<Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>> coord_diff;
  std::size_t design_hash = 0;

  static std::size_t hash_designs(const std::vector<Design>& X) {
    std::size_t h = X.size();
    DesignHash dh;
    for (const auto& d : X) h = h * 1000003u ^ dh(d);
    return h;
  }

  static std::shared_ptr<const KrigingDistances> build(const SearchSpace& space,
                                                       const std::vector<Design>& X) {
    const int m = space.dimension();
    const auto n = static_cast<Eigen::Index>(X.size());
    for (const auto& v : space.variables)
      if (v.levels > 256) throw std::invalid_argument("kriging: more than 256 levels unsupported");

    auto out = std::make_shared<KrigingDistances>();
    out->s1.setZero(n, n);
    out->s2.setZero(n, n);
    out->coord_diff.resize(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
      auto& D = out->coord_diff[static_cast<std::size_t>(j)];
      D.resize(n, n);
      const double ir = 1.0 / (space.variables[static_cast<std::size_t>(j)].levels - 1.0);
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index k = i; k < n; ++k) {
          const int diff = std::abs(X[static_cast<std::size_t>(i)][j] -
                                    X[static_cast<std::size_t>(k)][j]);
          D(i, k) = static_cast<std::uint8_t>(diff);
          D(k, i) = D(i, k);
          const double d = diff * ir;
          out->s1(i, k) += d;
          out->s2(i, k) += d * d;
        }
      }
    }
    out->s1.triangularView<Eigen::StrictlyLower>() = out->s1.transpose();
    out->s2.triangularView<Eigen::StrictlyLower>() = out->s2.transpose();
    out->design_hash = hash_designs(X);
    return out;
  }
};

class KrigingModel final : public FittedSurrogate {
 public:
  bool supports_uncertainty() const override { return true; }

  double theta() const { return theta_; }

  static FitResult fit(SurrogateConfig config, const SearchSpace& space,
                       const std::vector<Design>& X, const std::vector<double>& Y,
                       const FitHints* hints = nullptr) {
    check_fit_preconditions(X, Y);
    const KrigingCorr corr = kriging_corr_from_string(config.kernel);
    const KrigingTrend trend = kriging_trend_from_string(config.trend);

    std::shared_ptr<const KrigingDistances> dist;
    if (hints && hints->kriging_cache &&
        hints->kriging_cache->design_hash == KrigingDistances::hash_designs(X)) {
      dist = hints->kriging_cache;
    } else {
      dist = KrigingDistances::build(space, X);
    }

    const Eigen::MatrixXd Xs = scale_designs(space, X);
    const Eigen::VectorXd y =
        Eigen::Map<const Eigen::VectorXd>(Y.data(), static_cast<Eigen::Index>(Y.size()));
    const Eigen::MatrixXd F = trend_matrix(trend, Xs);
    if (F.cols() >= Xs.rows())
      return FitResult::infeasible("kriging: trend has as many terms as samples");

    Workspace ws{space, *dist, Xs, F, y};

    // concentrated log-likelihood over log10(theta), coarse grid then a
    // golden-section refinement (single restart)
    double best_l = -std::numeric_limits<double>::infinity();
    double best_log_theta = 0.0;
    auto consider = [&](double lt) {
      const double l = ws.loglik(corr, std::pow(10.0, lt));
      if (l > best_l) {
        best_l = l;
        best_log_theta = lt;
      }
      return l;
    };

    double lo, hi;
    if (hints && hints->kriging_theta) {
      const double center = std::log10(*hints->kriging_theta);
      for (double lt : {center - 0.5, center, center + 0.5}) consider(lt);
      lo = best_log_theta - 0.5;
      hi = best_log_theta + 0.5;
    } else {
      for (double lt : {-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0}) consider(lt);
      lo = best_log_theta - 1.0;
      hi = best_log_theta + 1.0;
    }
    if (!std::isfinite(best_l))
      return FitResult::infeasible("kriging: correlation matrix indefinite for all length scales");

    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
    double f1 = consider(x1), f2 = consider(x2);
    for (int it = 0; it < 8; ++it) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + kInvPhi * (b - a);
        f2 = consider(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - kInvPhi * (b - a);
        f1 = consider(x1);
      }
    }

    const double theta = std::pow(10.0, best_log_theta);
    if (!ws.factorize(corr, theta))
      return FitResult::infeasible("kriging: final correlation matrix indefinite");

    // interpolation sanity; the nugget makes the training residual
    // exactly nugget * |alpha|
    const double scale = std::max(1.0, y.cwiseAbs().maxCoeff());
    if (kNugget * ws.alpha.cwiseAbs().maxCoeff() > 1e-8 * scale)
      return FitResult::infeasible("kriging: system too ill-conditioned to interpolate");

    auto model = std::unique_ptr<KrigingModel>(new KrigingModel(std::move(config), space, X));
    model->corr_ = corr;
    model->trend_ = trend;
    model->theta_ = theta;
    model->Xs_ = Xs;
    model->raw_.resize(static_cast<std::size_t>(Xs.rows()));
    for (std::size_t i = 0; i < X.size(); ++i) model->raw_[i] = X[i].values;
    model->inv_range_.resize(static_cast<std::size_t>(space.dimension()));
    for (int j = 0; j < space.dimension(); ++j)
      model->inv_range_[static_cast<std::size_t>(j)] =
          1.0 / (space.variables[static_cast<std::size_t>(j)].levels - 1.0);
    model->beta_ = ws.beta;
    model->alpha_ = ws.alpha;
    model->sigma2_ = ws.sigma2;
    model->Rinv_ = ws.llt.solve(Eigen::MatrixXd::Identity(Xs.rows(), Xs.rows()));
    model->RinvF_ = ws.llt.solve(F);
    model->Ginv_ = ws.G_llt.solve(Eigen::MatrixXd::Identity(F.cols(), F.cols()));
    model->build_tables();
    return FitResult::ok(std::move(model));
  }

  static Eigen::MatrixXd trend_matrix(KrigingTrend trend, const Eigen::MatrixXd& Xs) {
    const Eigen::Index n = Xs.rows(), m = Xs.cols();
    switch (trend) {
      case KrigingTrend::constant: return Eigen::MatrixXd::Ones(n, 1);
      case KrigingTrend::linear: {
        Eigen::MatrixXd F(n, m + 1);
        F.col(0).setOnes();
        F.rightCols(m) = Xs;
        return F;
      }
      case KrigingTrend::quad: {
        Eigen::MatrixXd F(n, 2 * m + 1);  // diagonal quadratic terms only
        F.col(0).setOnes();
        F.middleCols(1, m) = Xs;
        F.rightCols(m) = Xs.array().square().matrix();
        return F;
      }
    }
    throw std::logic_error("unreachable");
  }

 protected:
  void predict_impl(const PredictBatch& batch, Eigen::VectorXd& mean,
                    Eigen::VectorXd* sd) const override {
    const Eigen::MatrixXd Rc = cross_corr(batch);
    const Eigen::MatrixXd Fc = trend_matrix(trend_, batch.scaled);
    mean = Fc * beta_ + Rc * alpha_;
    if (sd) {
      // universal-kriging mean squared error with the trend correction
      const Eigen::MatrixXd V = Rc * Rinv_;                    // b x n
      const Eigen::ArrayXd rRr = (V.array() * Rc.array()).rowwise().sum();
      Eigen::MatrixXd U = Rc * RinvF_ - Fc;                    // b x p
      const Eigen::ArrayXd tr = ((U * Ginv_).array() * U.array()).rowwise().sum();
      const Eigen::ArrayXd s2 = sigma2_ * (1.0 - rRr + tr);
      *sd = s2.max(0.0).sqrt().matrix();
    }
  }

 private:
  static constexpr double kNugget = 1e-10;
  static constexpr double kSqrt3 = 1.7320508075688772;
  static constexpr double kSqrt5 = 2.23606797749979;

  KrigingModel(SurrogateConfig config, const SearchSpace& space, const std::vector<Design>& train)
      : FittedSurrogate(std::move(config), space, train) {}

  struct Workspace {
    const SearchSpace& space;
    const KrigingDistances& dist;
    const Eigen::MatrixXd& Xs;
    const Eigen::MatrixXd& F;
    const Eigen::VectorXd& y;

    Eigen::LLT<Eigen::MatrixXd> llt;
    Eigen::LLT<Eigen::MatrixXd> G_llt;
    Eigen::VectorXd beta;
    Eigen::VectorXd alpha;
    double sigma2 = 0;

    Eigen::MatrixXd corr_matrix(KrigingCorr corr, double theta) const {
      const Eigen::Index n = Xs.rows();
      const int m = static_cast<int>(Xs.cols());
      Eigen::MatrixXd R;
      switch (corr) {
        case KrigingCorr::ou: R = (-theta * dist.s1.array()).exp().matrix(); break;
        case KrigingCorr::sqexp: R = (-theta * dist.s2.array()).exp().matrix(); break;
        case KrigingCorr::gower: {
          const Eigen::ArrayXXd dg = dist.s1.array() / m;
          R = (-theta * dg * dg).exp().matrix();
          break;
        }
        case KrigingCorr::matern32:
        case KrigingCorr::matern52: {
          const double c = (corr == KrigingCorr::matern32 ? kSqrt3 : kSqrt5) * theta;
          Eigen::ArrayXXd acc = Eigen::ArrayXXd::Zero(n, n);
          for (int j = 0; j < m; ++j) {
            const int levels = space.variables[static_cast<std::size_t>(j)].levels;
            const double ir = 1.0 / (levels - 1.0);
            std::array<double, 256> table{};
            for (int d = 0; d < levels; ++d) {
              const double u = c * d * ir;
              table[static_cast<std::size_t>(d)] =
                  corr == KrigingCorr::matern32 ? std::log1p(u) - u
                                                : std::log1p(u + u * u / 3.0) - u;
            }
            const auto& D = dist.coord_diff[static_cast<std::size_t>(j)];
            for (Eigen::Index col = 0; col < n; ++col)
              for (Eigen::Index row = 0; row < n; ++row)
                acc(row, col) += table[D(row, col)];
          }
          R = acc.exp().matrix();
          break;
        }
      }
      R.diagonal().array() += kNugget;
      return R;
    }

    bool factorize(KrigingCorr corr, double theta) {
      llt.compute(corr_matrix(corr, theta));
      if (llt.info() != Eigen::Success) return false;
      const Eigen::MatrixXd RinvF = llt.solve(F);
      G_llt.compute(F.transpose() * RinvF);
      if (G_llt.info() != Eigen::Success) return false;
      beta = G_llt.solve(RinvF.transpose() * y);
      if (!beta.allFinite()) return false;
      const Eigen::VectorXd resid = y - F * beta;
      alpha = llt.solve(resid);
      sigma2 = std::max(0.0, resid.dot(alpha) / static_cast<double>(y.size()));
      return alpha.allFinite();
    }

    double loglik(KrigingCorr corr, double theta) {
      if (!factorize(corr, theta)) return -std::numeric_limits<double>::infinity();
      const double n = static_cast<double>(y.size());
      double log_det = 0;
      for (Eigen::Index i = 0; i < y.size(); ++i)
        log_det += std::log(llt.matrixLLT()(i, i));
      return -0.5 * n * std::log(std::max(sigma2, 1e-300)) - log_det;
    }
  };

  void build_tables() {
    const int m = space().dimension();
    tables_.assign(static_cast<std::size_t>(m), {});
    if (corr_ != KrigingCorr::matern32 && corr_ != KrigingCorr::matern52) return;
    const double c = (corr_ == KrigingCorr::matern32 ? kSqrt3 : kSqrt5) * theta_;
    for (int j = 0; j < m; ++j) {
      const int levels = space().variables[static_cast<std::size_t>(j)].levels;
      auto& t = tables_[static_cast<std::size_t>(j)];
      t.resize(static_cast<std::size_t>(levels));
      for (int d = 0; d < levels; ++d) {
        const double u = c * d * inv_range_[static_cast<std::size_t>(j)];
        t[static_cast<std::size_t>(d)] = corr_ == KrigingCorr::matern32
                                             ? std::log1p(u) - u
                                             : std::log1p(u + u * u / 3.0) - u;
      }
    }
  }

  // correlations between a candidate batch and the training designs
  Eigen::MatrixXd cross_corr(const PredictBatch& batch) const {
    const Eigen::Index b = batch.scaled.rows();
    const Eigen::Index n = Xs_.rows();
    const int m = static_cast<int>(Xs_.cols());
    Eigen::MatrixXd Rc(b, n);

    if (batch.designs) {
      // integer fast path
      for (Eigen::Index i = 0; i < b; ++i) {
        const auto& cd = (*batch.designs)[static_cast<std::size_t>(i)].values;
        for (Eigen::Index k = 0; k < n; ++k) {
          const auto& tk = raw_[static_cast<std::size_t>(k)];
          double acc = 0;
          switch (corr_) {
            case KrigingCorr::ou:
              for (int j = 0; j < m; ++j)
                acc += std::abs(cd[static_cast<std::size_t>(j)] - tk[static_cast<std::size_t>(j)]) *
                       inv_range_[static_cast<std::size_t>(j)];
              Rc(i, k) = std::exp(-theta_ * acc);
              break;
            case KrigingCorr::sqexp:
              for (int j = 0; j < m; ++j) {
                const double d =
                    (cd[static_cast<std::size_t>(j)] - tk[static_cast<std::size_t>(j)]) *
                    inv_range_[static_cast<std::size_t>(j)];
                acc += d * d;
              }
              Rc(i, k) = std::exp(-theta_ * acc);
              break;
            case KrigingCorr::gower:
              for (int j = 0; j < m; ++j)
                acc += std::abs(cd[static_cast<std::size_t>(j)] - tk[static_cast<std::size_t>(j)]) *
                       inv_range_[static_cast<std::size_t>(j)];
              acc /= m;
              Rc(i, k) = std::exp(-theta_ * acc * acc);
              break;
            case KrigingCorr::matern32:
            case KrigingCorr::matern52:
              for (int j = 0; j < m; ++j)
                acc += tables_[static_cast<std::size_t>(j)][static_cast<std::size_t>(std::abs(
                    cd[static_cast<std::size_t>(j)] - tk[static_cast<std::size_t>(j)]))];
              Rc(i, k) = std::exp(acc);
              break;
          }
        }
      }
      return Rc;
    }

    // generic scaled path (single-design predictions)
    for (Eigen::Index i = 0; i < b; ++i) {
      for (Eigen::Index k = 0; k < n; ++k) {
        double acc = 0;
        switch (corr_) {
          case KrigingCorr::ou:
            acc = (batch.scaled.row(i) - Xs_.row(k)).cwiseAbs().sum();
            Rc(i, k) = std::exp(-theta_ * acc);
            break;
          case KrigingCorr::sqexp:
            acc = (batch.scaled.row(i) - Xs_.row(k)).squaredNorm();
            Rc(i, k) = std::exp(-theta_ * acc);
            break;
          case KrigingCorr::gower:
            acc = (batch.scaled.row(i) - Xs_.row(k)).cwiseAbs().sum() / m;
            Rc(i, k) = std::exp(-theta_ * acc * acc);
            break;
          case KrigingCorr::matern32:
            for (int j = 0; j < m; ++j) {
              const double u = kSqrt3 * theta_ * std::abs(batch.scaled(i, j) - Xs_(k, j));
              acc += std::log1p(u) - u;
            }
            Rc(i, k) = std::exp(acc);
            break;
          case KrigingCorr::matern52:
            for (int j = 0; j < m; ++j) {
              const double u = kSqrt5 * theta_ * std::abs(batch.scaled(i, j) - Xs_(k, j));
              acc += std::log1p(u + u * u / 3.0) - u;
            }
            Rc(i, k) = std::exp(acc);
            break;
        }
      }
    }
    return Rc;
  }

  KrigingCorr corr_ = KrigingCorr::sqexp;
  KrigingTrend trend_ = KrigingTrend::constant;
  double theta_ = 1.0;
  Eigen::MatrixXd Xs_;
  std::vector<std::vector<int>> raw_;
  std::vector<double> inv_range_;
  std::vector<std::vector<double>> tables_;
  Eigen::VectorXd beta_, alpha_;
  double sigma2_ = 0;
  Eigen::MatrixXd Rinv_, RinvF_, Ginv_;
};

}  // namespace samadiego
