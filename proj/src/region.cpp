#include "rcr/region.hpp"

#include <cmath>

#include "rcr/errors.hpp"
#include "rcr/stats.hpp"

namespace rcr {

ConfidenceRegion build_region(const EstimatorState& state, const MarkovModel& model,
                              double alpha) {
  if (state.n < 1 || !state.theta_hat_valid)
    throw InvalidConfig("build_region needs at least one transition");
  const int d = model.dim();

  ConfidenceRegion region;
  region.n = state.n;
  region.alpha = alpha;
  region.kappa = chi2_quantile(d, alpha);
  region.center = state.theta_hat;
  region.chol_lower = cholesky(model.fisher_information(state.theta_tilde));

  const double scale = std::sqrt(region.kappa / static_cast<double>(state.n));
  region.extreme_points.reserve(2 * static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    const Vec axis = solve_lower_transposed(region.chol_lower, Vec::basis(d, j));
    region.extreme_points.push_back(region.center - scale * axis);
    region.extreme_points.push_back(region.center + scale * axis);
  }
  for (const Vec& p : region.extreme_points)
    if (!model.box().contains(p)) region.extreme_point_outside_box = true;
  return region;
}

bool region_contains(const ConfidenceRegion& region, const MarkovModel& model, const Vec& theta) {
  if (!model.box().contains(theta)) return false;
  const Mat& l = region.chol_lower;
  const int d = l.dim();
  const Vec diff = region.center - theta;
  double sum = 0.0;
  for (int i = 0; i < d; ++i) {
    double s = 0.0;
    for (int j = i; j < d; ++j) s += l(j, i) * diff[j];
    sum += s * s;
  }
  return static_cast<double>(region.n) * sum < region.kappa;
}

namespace {

// Largest singular value of (L^T)^{-1}, i.e. 1 / sqrt(lambda_min(L L^T)).
double inv_chol_spectral_norm(const Mat& l) {
  const int d = l.dim();
  if (d == 1) return 1.0 / l(0, 0);
  if (d == 2) {
    // M = (L^T)^{-1} has entries [[1/a, -c/(a b)], [0, 1/b]] for
    // L = [[a, 0], [c, b]]; spectral norm from the 2x2 Gram eigenvalues.
    const double a = l(0, 0), c = l(1, 0), b = l(1, 1);
    const double m00 = 1.0 / a, m01 = -c / (a * b), m11 = 1.0 / b;
    const double t = m00 * m00 + m01 * m01 + m11 * m11;
    const double det = m00 * m11;
    const double disc = std::sqrt(std::max(0.0, t * t - 4.0 * det * det));
    return std::sqrt(0.5 * (t + disc));
  }
  // Power iteration on (L L^T)^{-1} through two triangular solves.
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = 1.0 / std::sqrt(static_cast<double>(d));
  double lambda = 0.0;
  for (int iter = 0; iter < 10000; ++iter) {
    Vec w = solve_lower_transposed(l, solve_lower(l, v));
    const double nw = w.norm();
    w *= 1.0 / nw;
    const double prev = lambda;
    lambda = nw;
    v = w;
    if (iter > 0 && std::abs(lambda - prev) <= 1e-10 * lambda) break;
  }
  return std::sqrt(lambda);
}

}  // namespace

double region_diameter(const ConfidenceRegion& region) {
  if (region.n < 1) throw InvalidConfig("region_diameter needs n >= 1");
  return 2.0 * std::sqrt(region.kappa / static_cast<double>(region.n)) *
         inv_chol_spectral_norm(region.chol_lower);
}

RegionStreamState make_region_stream(const MarkovModel& model, const EstimatorConfig& config,
                                     double alpha) {
  RegionStreamState stream;
  stream.estimator = init_estimator(model, config);
  stream.alpha = alpha;
  return stream;
}

void region_step(RegionStreamState& stream, const MarkovModel& model,
                 const EstimatorConfig& config, double z_new) {
  observe(stream.estimator, model, config, z_new);
  if (stream.estimator.n >= 1)
    stream.region = build_region(stream.estimator, model, stream.alpha);
}

}  // namespace rcr
