#pragma once

#include <array>

namespace rcr {

/// Streaming maximum-likelihood estimate for i.i.d. Gaussian data in
/// (mu, sigma^2) coordinates: running mean and population variance
/// (divisor n + 1 for observations Z_0..Z_n). Used as an independent
/// cross-check for the general machinery at rho = 0.
struct MleState {
  long n = 0;           // observations seen minus one
  double mu_hat = 0.0;
  double sigma2_hat = 0.0;
};

/// State after seeing only Z_0.
MleState mle_init(double z0);

/// Welford-form update; equals the two-pass batch mean/variance exactly.
/// The cross term uses the previous mean:
///   sigma2_n = (n/(n+1)) sigma2_{n-1} + (n/(n+1)^2) (mu_{n-1} - z)^2.
MleState mle_step(const MleState& state, double z_new);

/// Variant with the updated mean (mu_n - z)^2 in the cross term. Breaks
/// batch equality (Z = (0,2) gives 0.25 instead of 1); kept only so tests
/// can document the discrepancy.
MleState mle_step_updated_mean(const MleState& state, double z_new);

/// n/s2 (mu_hat - mu)^2 + n/(2 s2^2) (s2 - sigma2)^2 with s2 = sigma2_hat.
/// Throws DegenerateVariance when all observations were identical.
double mle_u_statistic(const MleState& state, double mu, double sigma2);

/// The four extreme points of the level-kappa ellipse in (mu, sigma^2):
///   (mu_hat +- sqrt(kappa/n) sigma_hat, sigma2_hat) and
///   (mu_hat, sigma2_hat (1 +- sqrt(2 kappa/n))).
std::array<std::array<double, 2>, 4> mle_extreme_points(const MleState& state, double alpha);

/// Coordinate helper: (mu, sigma^2) -> (mu, sigma).
std::array<double, 2> to_mu_sigma(const std::array<double, 2>& mu_sigma2);

}  // namespace rcr
