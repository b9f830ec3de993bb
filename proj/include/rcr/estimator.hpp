#pragma once

#include <optional>

#include "rcr/linalg.hpp"
#include "rcr/model.hpp"

namespace rcr {

/// What to do when a base step leaves the parameter box.
enum class Projection { clamp, none };

struct EstimatorConfig {
  double beta = 0.0;
  Vec theta0;
  Projection projection = Projection::clamp;
  /// Whether beta satisfies the model's lower bound; recorded at
  /// construction and echoed into reports.
  bool beta_honors_bound = false;
};

/// Resolves beta (nullopt = 1.05 x model bound) and theta0 (nullopt = box
/// midpoint) and validates both. Throws InvalidConfig on beta <= 0 or
/// theta0 outside the box. beta below the model bound is allowed but
/// recorded (warn-and-proceed).
EstimatorConfig make_estimator_config(const MarkovModel& model,
                                      std::optional<double> beta = std::nullopt,
                                      std::optional<Vec> theta0 = std::nullopt,
                                      Projection projection = Projection::clamp);

/// Streaming state of the coupled recursions. The base point theta_tilde
/// follows the stochastic-approximation step; hessian_avg and score_accum
/// are the running averages feeding the refined read-out theta_hat:
///
///   theta_tilde_n = theta_tilde_{n-1} + (beta/n) psi_n(theta_tilde_{n-1})
///   H_n = ((n-1)/n) H_{n-1} + (1/n) Psi_n(theta_tilde_{n-1})
///   G_n = ((n-1)/n) G_{n-1} + (1/n) (Id + beta H_n) psi_n(theta_tilde_{n-1})
///   theta_hat_n = I(theta_tilde_n)^{-1} (G_n - H_n theta_tilde_n)
///
/// n counts observed transitions; the first observation only seeds z_prev.
///
/// Plain value type with a single-writer contract: one logical stream
/// mutates it sequentially. A copy is an independent checkpoint; parallel
/// replications each own their state and generator.
struct EstimatorState {
  long n = 0;
  Vec theta_tilde;
  Mat hessian_avg;   // H_n, converges to -I(theta*)
  Vec score_accum;   // G_n
  Vec theta_hat;     // valid once n >= 1; deliberately not box-projected
  bool theta_hat_valid = false;
  double z_prev = 0.0;
  bool has_z_prev = false;
  long projections = 0;  // count of clamped base steps
};

/// Audit record of one transition; replaying records reproduces the state.
struct StepRecord {
  long n = 0;
  Vec psi;
  Mat big_psi;
  Vec theta_tilde_before;
  Vec theta_tilde_after;
  Vec theta_hat_after;
  bool projected = false;
};

/// Fresh n = 0 state: zero averages, theta_tilde = theta0, no data seen.
EstimatorState init_estimator(const MarkovModel& model, const EstimatorConfig& config);

/// The stochastic-approximation update of theta_tilde alone, evaluated at
/// (state.z_prev, z_new). Pure: returns the new point without touching
/// state. *projected reports whether the box clamp fired.
Vec base_step(const EstimatorState& state, const MarkovModel& model,
              const EstimatorConfig& config, double z_new, bool* projected = nullptr);

/// Full per-observation transition: updates hessian_avg, score_accum,
/// theta_tilde and theta_hat, in that order. Requires a seeded z_prev.
StepRecord refined_step(EstimatorState& state, const MarkovModel& model,
                     const EstimatorConfig& config, double z_new);

/// Single entry point for a raw observation stream: the first call seeds
/// z_prev (observation Z_0), every later call performs refined_step.
void observe(EstimatorState& state, const MarkovModel& model,
             const EstimatorConfig& config, double z);

/// Data-dependent centering -I(theta_tilde)^{-1} H_n theta_star toward
/// which theta_hat is asymptotically normal. Simulation diagnostics only
/// (requires the true parameter).
Vec centering_oracle(const EstimatorState& state, const MarkovModel& model,
                    const Vec& theta_star);

/// n (theta_hat - theta)^T I(theta_tilde) (theta_hat - theta), computed as
/// n |L^T (theta_hat - theta)|^2 with L the Cholesky factor of I(theta_tilde).
double u_statistic(const EstimatorState& state, const MarkovModel& model, const Vec& theta);

}  // namespace rcr
