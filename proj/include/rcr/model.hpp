#pragma once

#include <array>

#include "rcr/linalg.hpp"
#include "rcr/rng.hpp"

namespace rcr {

/// Box parameter space: a product of closed intervals, one per coordinate.
struct ParameterBox {
  Vec lower;
  Vec upper;

  ParameterBox(Vec lo, Vec hi);

  int dim() const { return lower.dim(); }
  bool contains(const Vec& theta) const;
  /// Componentwise clamp; *n_clamped (if given) receives the number of
  /// coordinates that moved.
  Vec clamp(const Vec& theta, int* n_clamped = nullptr) const;
  Vec midpoint() const;
};

/// Score vector and Hessian of the log transition density at one observed
/// transition.
struct ScoreEval {
  Vec psi;
  Mat big_psi;
};

/// Parametric one-step Markov kernel: everything the streaming estimator
/// and the confidence-region construction need from a model family.
class MarkovModel {
 public:
  virtual ~MarkovModel() = default;

  virtual int dim() const = 0;
  virtual const ParameterBox& box() const = 0;

  /// log p_theta(x, y) for the transition x -> y.
  virtual double log_transition_density(const Vec& theta, double x, double y) const = 0;

  /// Gradient and Hessian in theta of log p_theta(x, y).
  virtual ScoreEval score_and_hessian(const Vec& theta, double x, double y) const = 0;

  /// Fisher information matrix I(theta); positive definite on the box.
  virtual Mat fisher_information(const Vec& theta) const = 0;

  /// One transition draw from the kernel at theta, given the previous value.
  virtual double sample_transition(const Vec& theta, double x, Rng& rng) const = 0;

  /// Draw of the initial state from the stationary law at theta.
  virtual double sample_stationary_initial(const Vec& theta, Rng& rng) const = 0;

  /// Smallest step scale for which the stochastic-approximation recursion
  /// is covered by the convergence analysis on this box.
  virtual double beta_lower_bound() const = 0;
};

/// AR(1) kernel with Gaussian innovations and known correlation rho:
///   Z_n = rho Z_{n-1} + (1 - rho) mu + sigma sqrt(1 - rho^2) g_n,
/// parameterized by theta = (mu, sigma) on a box with sigma > 0.
/// rho = 0 degenerates to i.i.d. N(mu, sigma^2) observations.
class GaussianAR1Model final : public MarkovModel {
 public:
  GaussianAR1Model(double rho, ParameterBox box);

  int dim() const override { return 2; }
  const ParameterBox& box() const override { return box_; }
  double rho() const { return rho_; }

  double log_transition_density(const Vec& theta, double x, double y) const override;
  ScoreEval score_and_hessian(const Vec& theta, double x, double y) const override;
  Mat fisher_information(const Vec& theta) const override;
  double sample_transition(const Vec& theta, double x, Rng& rng) const override;
  double sample_stationary_initial(const Vec& theta, Rng& rng) const override;
  double beta_lower_bound() const override;

  /// Conditional mean of the next state given the current one.
  double transition_mean(const Vec& theta, double x) const;
  /// Deterministic kernel map: the transition draw produced from a given
  /// standard-normal variate. sample_transition == this at g = rng.normal().
  double transition_from_gaussian(const Vec& theta, double x, double g) const;

  /// Closed form of E_{theta*}[psi_n(theta) | F_{n-1}] (the score's
  /// conditional mean under the true parameter).
  Vec conditional_score_mean(const Vec& theta, const Vec& theta_star) const;

  /// First, second and fourth conditional moments of
  /// Y = Z_n - rho Z_{n-1} - (1 - rho) mu under theta*.
  std::array<double, 3> conditional_y_moments(const Vec& theta, const Vec& theta_star) const;

 private:
  double rho_;
  ParameterBox box_;
};

/// The i.i.d. Gaussian observation model: the rho = 0 member of the family.
GaussianAR1Model make_iid_gaussian(ParameterBox box);

}  // namespace rcr
