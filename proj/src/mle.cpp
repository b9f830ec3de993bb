#include "rcr/mle.hpp"

#include <cmath>

#include "rcr/errors.hpp"
#include "rcr/stats.hpp"

namespace rcr {

MleState mle_init(double z0) { return MleState{0, z0, 0.0}; }

MleState mle_step(const MleState& state, double z_new) {
  const double n = static_cast<double>(state.n + 1);
  MleState next;
  next.n = state.n + 1;
  // Incremental form of (n mu + z)/(n+1): exact when z equals the mean, so
  // constant sequences keep a zero variance.
  const double gap = state.mu_hat - z_new;
  next.mu_hat = state.mu_hat - gap / (n + 1.0);
  next.sigma2_hat = (n / (n + 1.0)) * state.sigma2_hat + (n / ((n + 1.0) * (n + 1.0))) * gap * gap;
  return next;
}

MleState mle_step_updated_mean(const MleState& state, double z_new) {
  const double n = static_cast<double>(state.n + 1);
  MleState next;
  next.n = state.n + 1;
  next.mu_hat = state.mu_hat - (state.mu_hat - z_new) / (n + 1.0);
  const double gap = next.mu_hat - z_new;
  next.sigma2_hat = (n / (n + 1.0)) * state.sigma2_hat + (n / ((n + 1.0) * (n + 1.0))) * gap * gap;
  return next;
}

double mle_u_statistic(const MleState& state, double mu, double sigma2) {
  if (state.n < 1) throw InvalidConfig("mle_u_statistic needs n >= 1");
  const double s2 = state.sigma2_hat;
  if (s2 <= 1e-300) throw DegenerateVariance("sample variance is zero");
  const double n = static_cast<double>(state.n);
  const double dmu = state.mu_hat - mu;
  const double ds2 = s2 - sigma2;
  return n / s2 * dmu * dmu + n / (2.0 * s2 * s2) * ds2 * ds2;
}

std::array<std::array<double, 2>, 4> mle_extreme_points(const MleState& state, double alpha) {
  if (state.n < 1) throw InvalidConfig("mle_extreme_points needs n >= 1");
  const double s2 = state.sigma2_hat;
  if (s2 <= 1e-300) throw DegenerateVariance("sample variance is zero");
  const double kappa_over_n = chi2_quantile(2, alpha) / static_cast<double>(state.n);
  const double s = std::sqrt(s2);
  const double r = std::sqrt(kappa_over_n);
  const double q = std::sqrt(2.0 * kappa_over_n);
  return {{{state.mu_hat + r * s, s2},
           {state.mu_hat - r * s, s2},
           {state.mu_hat, (1.0 + q) * s2},
           {state.mu_hat, (1.0 - q) * s2}}};
}

std::array<double, 2> to_mu_sigma(const std::array<double, 2>& mu_sigma2) {
  return {mu_sigma2[0], std::sqrt(mu_sigma2[1])};
}

}  // namespace rcr
