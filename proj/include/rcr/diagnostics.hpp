#pragma once

#include <cstdint>

#include <nlohmann/json_fwd.hpp>

#include "rcr/estimator.hpp"

namespace rcr {

/// Per-step asymptotic quantities for verifying the estimator's linear
/// decomposition theta_hat = centering + (G_n/n) sum_i psi_i(theta*) + eps
/// with G_n = I(theta_tilde_n)^{-1}. The residual eps is recovered from
/// that identity exactly rather than from third-derivative code.
struct AsymptoticDiagnostics {
  long n = 0;
  double delta_norm = 0.0;            // |theta_tilde - theta*|
  Vec centering;                       // data-dependent centering
  Vec residual;                       // eps
  double linearization_residual = 0;  // |eps|
  double hessian_avg_drift = 0.0;     // |H_n + I(theta*)|_max
};

/// psi_sum_at_star must be sum_{i<=n} psi_i(theta*) accumulated alongside
/// the stream (diagnostic mode; requires the true parameter).
AsymptoticDiagnostics linearization_diagnostics(const EstimatorState& state,
                                                const MarkovModel& model,
                                                const Vec& theta_star,
                                                const Vec& psi_sum_at_star);

struct AssumptionReportOptions {
  int grid_points = 21;     // per axis, for the root and moment-ratio scans
  int mc_draws = 20000;     // innovation draws per grid point
  int lipschitz_pairs = 1000;
  int supremum_reps = 32;   // chains per length for the score-sup trend
  std::uint64_t seed = 1;
};

/// Desk-scale empirical checks of the regularity conditions behind the
/// estimator: unique root of the conditional score mean, bounded
/// second-moment ratio of the score, Lipschitz bound for the score mean,
/// and the vanishing-supremum trend of the score at theta*.
nlohmann::json assumption_report(const GaussianAR1Model& model, const Vec& theta_star,
                                 const AssumptionReportOptions& options);

}  // namespace rcr
