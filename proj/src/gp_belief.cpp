#include "bopomdp/gp_belief.hpp"

#include <cmath>
#include <stdexcept>

#include "bopomdp/errors.hpp"

namespace bopomdp {

namespace {

constexpr double kInitialJitter = 1e-8;
constexpr double kMaxJitter = 1e-4;
constexpr int kRefactorPeriod = 64;
constexpr double kSqrt5 = 2.23606797749978969;

// Kernel value from the squared distance.
double kernel_r2(const KernelSpec& s, double r2) {
  switch (s.kind) {
    case KernelKind::RBF:
      return s.signal_variance * std::exp(-0.5 * r2 / (s.lengthscale * s.lengthscale));
    case KernelKind::Matern52: {
      const double a = kSqrt5 * std::sqrt(r2) / s.lengthscale;
      return s.signal_variance * (1.0 + a + a * a / 3.0) * std::exp(-a);
    }
    case KernelKind::Exponential:
      return s.signal_variance * std::exp(-std::sqrt(r2) / s.lengthscale);
  }
  return 0.0;
}

// Scalar w(r) with grad_x k(x, xi) = w * (xi - x); analytic kinds only.
double gradient_weight(const KernelSpec& s, double r2, double k) {
  if (s.kind == KernelKind::RBF) {
    return k / (s.lengthscale * s.lengthscale);
  }
  // Matern52
  const double l = s.lengthscale;
  const double a = kSqrt5 * std::sqrt(r2) / l;
  return (5.0 * s.signal_variance / (3.0 * l * l)) * (1.0 + a) * std::exp(-a);
}

}  // namespace

void KernelSpec::validate() const {
  if (!(lengthscale > 0.0) || !std::isfinite(lengthscale))
    throw std::invalid_argument("kernel lengthscale must be positive");
  if (!(signal_variance > 0.0) || !std::isfinite(signal_variance))
    throw std::invalid_argument("kernel signal_variance must be positive");
  if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance))
    throw std::invalid_argument("kernel noise_variance must be non-negative");
}

double kernel_eval(const KernelSpec& spec, const Eigen::Vector2d& a,
                   const Eigen::Vector2d& b) {
  return kernel_r2(spec, (a - b).squaredNorm());
}

BeliefGP::BeliefGP(KernelSpec spec) : kernel_(spec), jitter_(kInitialJitter) {
  kernel_.validate();
  inputs_mat_.resize(0, 2);
  targets_.resize(0);
  chol_.resize(0, 0);
  fwd_.resize(0);
  alpha_.resize(0);
}

BeliefGP BeliefGP::updated(const Eigen::Vector2d& x, double observation) const {
  return updated(std::span<const Eigen::Vector2d>(&x, 1),
                 std::span<const double>(&observation, 1));
}

BeliefGP BeliefGP::updated(std::span<const Eigen::Vector2d> xs,
                           std::span<const double> observations) const {
  if (xs.size() != observations.size())
    throw std::invalid_argument("observation count does not match point count");
  BeliefGP next(*this);
  if (!xs.empty()) next.extend(xs, observations);
  return next;
}

BeliefGP BeliefGP::refactored() const {
  BeliefGP next(*this);
  if (next.size() > 0) next.refactor();
  return next;
}

Eigen::MatrixXd BeliefGP::cross_covariance(
    std::span<const Eigen::Vector2d> xs) const {
  const int n = size();
  const int m = static_cast<int>(xs.size());
  Eigen::MatrixXd P(m, 2);
  for (int j = 0; j < m; ++j) P.row(j) = xs[j].transpose();
  // Squared distances via the usual expansion; clamp tiny negatives away.
  Eigen::MatrixXd D2 =
      (-2.0 * inputs_mat_ * P.transpose()).colwise() +
      inputs_mat_.rowwise().squaredNorm();
  D2.rowwise() += P.rowwise().squaredNorm().transpose();
  D2 = D2.cwiseMax(0.0);

  const double l = kernel_.lengthscale;
  const double sv = kernel_.signal_variance;
  switch (kernel_.kind) {
    case KernelKind::RBF:
      return sv * (-0.5 / (l * l) * D2.array()).exp().matrix();
    case KernelKind::Matern52: {
      Eigen::ArrayXXd a = (kSqrt5 / l) * D2.array().sqrt();
      return (sv * (1.0 + a + a.square() / 3.0) * (-a).exp()).matrix();
    }
    case KernelKind::Exponential:
      return sv * (-(D2.array().sqrt()) / l).exp().matrix();
  }
  return Eigen::MatrixXd::Zero(n, m);
}

void BeliefGP::extend(std::span<const Eigen::Vector2d> xs,
                      std::span<const double> obs) {
  const int old_n = size();
  const int m = static_cast<int>(xs.size());

  inputs_.insert(inputs_.end(), xs.begin(), xs.end());
  inputs_mat_.conservativeResize(old_n + m, 2);
  targets_.conservativeResize(old_n + m);
  for (int j = 0; j < m; ++j) {
    inputs_mat_.row(old_n + j) = xs[j].transpose();
    targets_(old_n + j) = obs[j];
  }
  since_refactor_ += m;

  if (old_n == 0 || since_refactor_ >= kRefactorPeriod) {
    refactor();
    return;
  }

  const double diag = kernel_.noise_variance + jitter_;
  Eigen::MatrixXd C(old_n, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < old_n; ++i)
      C(i, j) = kernel_eval(kernel_, inputs_[i], xs[j]);
  Eigen::MatrixXd B(m, m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i <= j; ++i) {
      double v = kernel_eval(kernel_, xs[i], xs[j]);
      if (i == j) v += diag;
      B(i, j) = v;
      B(j, i) = v;
    }
  }

  Eigen::MatrixXd V = C;
  chol_.triangularView<Eigen::Lower>().solveInPlace(V);
  Eigen::MatrixXd S = B - V.transpose() * V;
  Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success) {
    refactor();  // escalates jitter as needed
    return;
  }

  Eigen::MatrixXd grown(old_n + m, old_n + m);
  grown.setZero();
  grown.topLeftCorner(old_n, old_n) = chol_;
  grown.bottomLeftCorner(m, old_n) = V.transpose();
  grown.bottomRightCorner(m, m) = llt.matrixL();
  chol_ = std::move(grown);

  Eigen::VectorXd y_new(m);
  for (int j = 0; j < m; ++j) y_new(j) = obs[j];
  Eigen::VectorXd r = y_new - V.transpose() * fwd_;
  chol_.bottomRightCorner(m, m).triangularView<Eigen::Lower>().solveInPlace(r);
  fwd_.conservativeResize(old_n + m);
  fwd_.tail(m) = r;

  alpha_ = fwd_;
  chol_.transpose().triangularView<Eigen::Upper>().solveInPlace(alpha_);
}

void BeliefGP::refactor() {
  const int n = size();
  Eigen::MatrixXd K(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i <= j; ++i) {
      double v = kernel_eval(kernel_, inputs_[i], inputs_[j]);
      K(i, j) = v;
      K(j, i) = v;
    }
  }
  for (;;) {
    Eigen::MatrixXd A = K;
    A.diagonal().array() += kernel_.noise_variance + jitter_;
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() == Eigen::Success) {
      chol_ = llt.matrixL();
      fwd_ = targets_;
      chol_.triangularView<Eigen::Lower>().solveInPlace(fwd_);
      alpha_ = fwd_;
      chol_.transpose().triangularView<Eigen::Upper>().solveInPlace(alpha_);
      since_refactor_ = 0;
      return;
    }
    if (jitter_ >= kMaxJitter)
      throw FactorizationFailure("covariance not positive definite at maximum jitter");
    jitter_ = std::min(2.0 * jitter_, kMaxJitter);
  }
}

double BeliefGP::posterior_mean(const Eigen::Vector2d& x) const {
  if (size() == 0) return 0.0;
  return cross_covariance(std::span<const Eigen::Vector2d>(&x, 1)).col(0).dot(alpha_);
}

double BeliefGP::posterior_var(const Eigen::Vector2d& x) const {
  if (size() == 0) return kernel_.signal_variance;
  Eigen::VectorXd v = cross_covariance(std::span<const Eigen::Vector2d>(&x, 1)).col(0);
  chol_.triangularView<Eigen::Lower>().solveInPlace(v);
  return std::max(0.0, kernel_.signal_variance - v.squaredNorm());
}

double BeliefGP::posterior_std(const Eigen::Vector2d& x) const {
  return std::sqrt(posterior_var(x));
}

Eigen::Vector2d BeliefGP::mean_gradient(const Eigen::Vector2d& x) const {
  if (size() == 0) return Eigen::Vector2d::Zero();
  if (kernel_.kind == KernelKind::Exponential) {
    const double h = 1e-5 * kernel_.lengthscale;
    const double gx = (posterior_mean(x + Eigen::Vector2d(h, 0)) -
                       posterior_mean(x - Eigen::Vector2d(h, 0))) /
                      (2.0 * h);
    const double gy = (posterior_mean(x + Eigen::Vector2d(0, h)) -
                       posterior_mean(x - Eigen::Vector2d(0, h))) /
                      (2.0 * h);
    return {gx, gy};
  }
  Eigen::Vector2d g = Eigen::Vector2d::Zero();
  for (int i = 0; i < size(); ++i) {
    const double r2 = (x - inputs_[i]).squaredNorm();
    const double k = kernel_r2(kernel_, r2);
    g += alpha_(i) * gradient_weight(kernel_, r2, k) * (inputs_[i] - x);
  }
  return g;
}

std::vector<PointStats> BeliefGP::stats_at(
    std::span<const Eigen::Vector2d> xs) const {
  const int n = size();
  const int m = static_cast<int>(xs.size());
  std::vector<PointStats> out(static_cast<std::size_t>(m));
  const double prior_std = std::sqrt(kernel_.signal_variance);
  if (n == 0) {
    for (auto& s : out) s.stddev = prior_std;
    return out;
  }

  Eigen::MatrixXd K = cross_covariance(xs);  // n x m

  // Mean and gradient share the weighted kernel sums.
  Eigen::VectorXd mean = K.transpose() * alpha_;
  if (kernel_.kind == KernelKind::Exponential) {
    for (int j = 0; j < m; ++j) out[j].mean_grad = mean_gradient(xs[j]);
  } else {
    Eigen::MatrixXd W(n, m);
    if (kernel_.kind == KernelKind::RBF) {
      const double inv_l2 = 1.0 / (kernel_.lengthscale * kernel_.lengthscale);
      W = inv_l2 * (K.array().colwise() * alpha_.array()).matrix();
    } else {
      const double l = kernel_.lengthscale;
      const double c = 5.0 * kernel_.signal_variance / (3.0 * l * l);
      for (int j = 0; j < m; ++j) {
        for (int i = 0; i < n; ++i) {
          const double r = (xs[j] - inputs_[i]).norm();
          const double a = kSqrt5 * r / l;
          W(i, j) = alpha_(i) * c * (1.0 + a) * std::exp(-a);
        }
      }
    }
    const Eigen::Matrix<double, 2, Eigen::Dynamic> s1 = inputs_mat_.transpose() * W;
    const Eigen::RowVectorXd s0 = W.colwise().sum();
    for (int j = 0; j < m; ++j) out[j].mean_grad = s1.col(j) - s0(j) * xs[j];
  }

  chol_.triangularView<Eigen::Lower>().solveInPlace(K);
  for (int j = 0; j < m; ++j) {
    out[j].mean = mean(j);
    const double var =
        std::max(0.0, kernel_.signal_variance - K.col(j).squaredNorm());
    out[j].stddev = std::sqrt(var);
  }
  return out;
}

}  // namespace bopomdp
