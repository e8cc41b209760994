#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace bopomdp {

enum class KernelKind { RBF, Matern52, Exponential };

struct KernelSpec {
  KernelKind kind = KernelKind::RBF;
  double lengthscale = 1.0;
  double signal_variance = 1.0;
  double noise_variance = 0.0;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

double kernel_eval(const KernelSpec& spec, const Eigen::Vector2d& a,
                   const Eigen::Vector2d& b);

struct PointStats {
  double mean = 0.0;
  double stddev = 0.0;
  Eigen::Vector2d mean_grad = Eigen::Vector2d::Zero();
};

// Gaussian-process posterior over a scalar field with a zero prior mean and
// fixed hyperparameters. Value semantics: updates return a new belief.
//
// The Cholesky factor of (K + noise_variance*I + jitter*I) is maintained
// incrementally by extending the triangular factor; a full refactorization
// runs every 64 accumulated updates. Jitter starts at 1e-8 and doubles up to
// 1e-4 when a factorization fails, after which FactorizationFailure is
// thrown.
class BeliefGP {
 public:
  BeliefGP() : BeliefGP(KernelSpec{}) {}
  explicit BeliefGP(KernelSpec spec);

  int size() const { return static_cast<int>(targets_.size()); }
  const KernelSpec& kernel() const { return kernel_; }
  double jitter() const { return jitter_; }
  const std::vector<Eigen::Vector2d>& inputs() const { return inputs_; }
  const Eigen::VectorXd& targets() const { return targets_; }
  int updates_since_refactor() const { return since_refactor_; }

  BeliefGP updated(const Eigen::Vector2d& x, double observation) const;
  BeliefGP updated(std::span<const Eigen::Vector2d> xs,
                   std::span<const double> observations) const;

  // Copy whose factor was rebuilt from scratch (resets the update counter).
  BeliefGP refactored() const;

  double posterior_mean(const Eigen::Vector2d& x) const;
  double posterior_var(const Eigen::Vector2d& x) const;   // excludes observation noise
  double posterior_std(const Eigen::Vector2d& x) const;

  // Gradient of the posterior mean. Analytic for RBF and Matern52, central
  // finite differences with step 1e-5 * lengthscale for Exponential.
  Eigen::Vector2d mean_gradient(const Eigen::Vector2d& x) const;

  // Batched mean / stddev / mean-gradient at several query points; one
  // triangular solve for the whole batch.
  std::vector<PointStats> stats_at(std::span<const Eigen::Vector2d> xs) const;

 private:
  void extend(std::span<const Eigen::Vector2d> xs, std::span<const double> obs);
  void refactor();
  Eigen::MatrixXd cross_covariance(std::span<const Eigen::Vector2d> xs) const;

  KernelSpec kernel_;
  std::vector<Eigen::Vector2d> inputs_;
  Eigen::MatrixXd inputs_mat_;  // n x 2 copy of inputs_ for batched kernels
  Eigen::VectorXd targets_;
  Eigen::MatrixXd chol_;        // lower triangular
  Eigen::VectorXd fwd_;         // L^-1 y
  Eigen::VectorXd alpha_;       // (K + sigma^2 I + jitter I)^-1 y
  double jitter_;
  int since_refactor_ = 0;
};

}  // namespace bopomdp
