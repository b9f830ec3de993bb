#pragma once

#include <functional>
#include <span>
#include <vector>

namespace rcr {

/// Phi(x) through the erfc relation; absolute error is that of libm erfc.
double standard_normal_cdf(double x);

/// Inverse of standard_normal_cdf. Acklam's rational approximation refined
/// by one Halley step; good to ~1e-13 over (0, 1).
double standard_normal_quantile(double p);

/// Regularized lower incomplete gamma P(a, x): series for x < a + 1,
/// Lentz continued fraction otherwise.
double regularized_gamma_p(double a, double x);

/// kappa with P(chi^2_dim < kappa) = 1 - alpha. Bracketed Newton iteration
/// on the incomplete-gamma CDF, started from the Wilson-Hilferty cube
/// approximation; converges to |dP| <= 1e-12 in at most 200 iterations.
double chi2_quantile(int dim, double alpha);

/// Exact sup distance between the empirical CDF of a sorted sample and a
/// reference CDF, evaluating both sides of every step discontinuity.
double ks_distance(std::span<const double> sorted_sample,
                   const std::function<double(double)>& cdf);

/// Nodes and weights for n-point Gauss-Hermite quadrature
/// (integral of f(t) exp(-t^2) dt = sum w_i f(t_i)).
struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussHermite gauss_hermite(int n);

}  // namespace rcr
