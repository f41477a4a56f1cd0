#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "rbt/error.hpp"

namespace rbt::opt {

/// Matern-5/2 kernel with one lengthscale per input dimension.
inline double matern52(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& ls) {
  const double r = ((a - b).array() / ls.array()).matrix().norm();
  const double s = std::sqrt(5.0) * r;
  return (1.0 + s + s * s / 3.0) * std::exp(-s);
}

struct GpPrediction {
  double mean = 0.0;
  double sd = 0.0;
};

/// Zero-mean GP on standardized targets with unit signal variance. Inputs are
/// expected in the unit cube.
class GaussianProcess {
 public:
  struct Options {
    double jitter = 1e-6;
    std::vector<double> lengthscale_grid{0.05, 0.1, 0.2, 0.35, 0.6, 1.0, 2.0};
    int sweeps = 2;
  };

  GaussianProcess() = default;
  explicit GaussianProcess(Options opt) : opt_(std::move(opt)) {}

  /// Fits lengthscales by coordinate-wise grid search on the log marginal
  /// likelihood. Throws DegenerateHistory when all targets coincide.
  void fit(const std::vector<std::vector<double>>& x, const std::vector<double>& y) {
    if (x.empty() || x.size() != y.size()) throw Error(ErrorCode::DegenerateHistory, "no observations");
    const auto n = static_cast<Eigen::Index>(x.size());
    const auto d = static_cast<Eigen::Index>(x.front().size());
    X_.resize(n, d);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < d; ++j) X_(i, j) = x[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    Eigen::VectorXd raw(n);
    for (Eigen::Index i = 0; i < n; ++i) raw(i) = y[static_cast<std::size_t>(i)];
    y_mean_ = raw.mean();
    const double var = n > 1 ? (raw.array() - y_mean_).square().sum() / static_cast<double>(n - 1) : 0.0;
    y_sd_ = std::sqrt(var);
    if (n > 1 && !(y_sd_ > 1e-12)) throw Error(ErrorCode::DegenerateHistory, "all observations are identical");
    if (n == 1) y_sd_ = 1.0;
    ys_ = (raw.array() - y_mean_) / y_sd_;

    ls_ = Eigen::VectorXd::Constant(d, 0.35);
    double best = log_marginal_likelihood(ls_);
    for (int sweep = 0; sweep < opt_.sweeps; ++sweep)
      for (Eigen::Index j = 0; j < d; ++j) {
        double keep = ls_(j);
        for (double l : opt_.lengthscale_grid) {
          Eigen::VectorXd trial = ls_;
          trial(j) = l;
          const double v = log_marginal_likelihood(trial);
          if (v > best + 1e-12) {
            best = v;
            keep = l;
          }
        }
        ls_(j) = keep;
      }
    factorize(ls_);
  }

  /// Prediction in standardized units.
  GpPrediction predict_standardized(const std::vector<double>& q) const {
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(q.data(), static_cast<Eigen::Index>(q.size()));
    Eigen::VectorXd k(X_.rows());
    for (Eigen::Index i = 0; i < X_.rows(); ++i) k(i) = matern52(X_.row(i).transpose(), x, ls_);
    const double mean = k.dot(alpha_);
    const Eigen::VectorXd v = chol_.matrixL().solve(k);
    const double var = std::max(1.0 - v.squaredNorm(), 1e-12);
    return {mean, std::sqrt(var)};
  }

  GpPrediction predict(const std::vector<double>& q) const {
    auto p = predict_standardized(q);
    return {y_mean_ + y_sd_ * p.mean, y_sd_ * p.sd};
  }

  double best_standardized() const { return ys_.maxCoeff(); }
  const Eigen::VectorXd& lengthscales() const { return ls_; }
  const Eigen::VectorXd& standardized_targets() const { return ys_; }
  double log_marginal_likelihood() const { return log_marginal_likelihood(ls_); }

 private:
  Eigen::MatrixXd gram(const Eigen::VectorXd& ls) const {
    const Eigen::Index n = X_.rows();
    Eigen::MatrixXd K(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j <= i; ++j) K(i, j) = K(j, i) = matern52(X_.row(i).transpose(), X_.row(j).transpose(), ls);
    K.diagonal().array() += opt_.jitter;
    return K;
  }

  double log_marginal_likelihood(const Eigen::VectorXd& ls) const {
    Eigen::LLT<Eigen::MatrixXd> llt(gram(ls));
    if (llt.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
    const Eigen::VectorXd a = llt.solve(ys_);
    const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    return -0.5 * ys_.dot(a) - 0.5 * logdet - 0.5 * static_cast<double>(ys_.size()) * std::log(2.0 * std::numbers::pi);
  }

  void factorize(const Eigen::VectorXd& ls) {
    chol_.compute(gram(ls));
    if (chol_.info() != Eigen::Success) throw Error(ErrorCode::DegenerateHistory, "kernel matrix is not positive definite");
    alpha_ = chol_.solve(ys_);
  }

  Options opt_;
  Eigen::MatrixXd X_;
  Eigen::VectorXd ys_;
  Eigen::VectorXd ls_;
  Eigen::VectorXd alpha_;
  Eigen::LLT<Eigen::MatrixXd> chol_;
  double y_mean_ = 0.0;
  double y_sd_ = 1.0;
};

inline double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// Expected improvement over `best` for maximization.
inline double expected_improvement(const GpPrediction& p, double best, double xi = 0.01) {
  if (p.sd <= 0.0) return std::max(p.mean - best - xi, 0.0);
  const double z = (p.mean - best - xi) / p.sd;
  return (p.mean - best - xi) * normal_cdf(z) + p.sd * normal_pdf(z);
}

}  // namespace rbt::opt
