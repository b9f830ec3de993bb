#include "rcr/stats.hpp"

#include <cmath>
#include <cstddef>
#include <limits>

#include "rcr/errors.hpp"

namespace rcr {

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

double standard_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("normal quantile needs p in (0,1)");
  // Acklam's piecewise rational approximation.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // One Halley refinement against the exact CDF.
  const double e = standard_normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

namespace {

// Series expansion of P(a, x), valid and fast for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double term = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x) = 1 - P(a, x) via modified Lentz.
double gamma_q_continued_fraction(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw DomainError("regularized_gamma_p: bad arguments");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_continued_fraction(a, x);
}

double chi2_quantile(int dim, double alpha) {
  if (dim < 1 || dim > 16) throw DomainError("chi2_quantile: dim must be in [1, 16]");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("chi2_quantile: alpha must be in (0,1)");
  const double p = 1.0 - alpha;
  const double a = 0.5 * dim;

  // Wilson-Hilferty start.
  const double z = standard_normal_quantile(p);
  const double t = 1.0 - 2.0 / (9.0 * dim) + z * std::sqrt(2.0 / (9.0 * dim));
  double x = dim * t * t * t;
  if (!(x > 0.0)) x = 0.5;

  // Expand a bracket [lo, hi] with f(lo) < 0 < f(hi), f(k) = P(a, k/2) - p.
  double lo = 0.0;
  double hi = std::max(2.0 * x, 1.0);
  while (regularized_gamma_p(a, 0.5 * hi) < p) hi *= 2.0;

  for (int iter = 0; iter < 200; ++iter) {
    const double f = regularized_gamma_p(a, 0.5 * x) - p;
    if (std::abs(f) <= 1e-12) break;
    if (f > 0.0) hi = x; else lo = x;
    // chi-square density at x; Newton step, bisection when it leaves the bracket.
    const double pdf = std::exp((a - 1.0) * std::log(x) - 0.5 * x - a * std::log(2.0) - std::lgamma(a));
    double next = x - f / pdf;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  return x;
}

double ks_distance(std::span<const double> sorted_sample,
                   const std::function<double(double)>& cdf) {
  const std::size_t n = sorted_sample.size();
  if (n == 0) throw EmptySample("ks_distance: empty sample");
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    // The empirical CDF jumps at each sample point; compare the reference
    // against both sides of the jump, taking its left limit below so that
    // step-function references are handled exactly too.
    const double f_right = cdf(sorted_sample[i]);
    const double f_left =
        cdf(std::nextafter(sorted_sample[i], -std::numeric_limits<double>::infinity()));
    const double lower = static_cast<double>(i) / static_cast<double>(n);
    const double upper = static_cast<double>(i + 1) / static_cast<double>(n);
    d = std::max(d, std::max(f_left - lower, upper - f_right));
  }
  return d;
}

GaussHermite gauss_hermite(int n) {
  if (n < 1) throw DomainError("gauss_hermite: n must be positive");
  GaussHermite gh;
  gh.nodes.resize(n);
  gh.weights.resize(n);
  const double pim4 = 0.7511255444649425;  // pi^{-1/4}
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    // Initial guesses for the roots of H_n, largest first (Numerical
    // Recipes "gauher" form), polished by Newton.
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(n, 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * gh.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * gh.nodes[1];
    } else {
      z = 2.0 * z - gh.nodes[i - 2];
    }
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = pim4;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15) break;
    }
    gh.nodes[i] = z;
    gh.nodes[n - 1 - i] = -z;
    gh.weights[i] = 2.0 / (pp * pp);
    gh.weights[n - 1 - i] = gh.weights[i];
  }
  return gh;
}

}  // namespace rcr
