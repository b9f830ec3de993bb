#include "rcr/model.hpp"

#include <cmath>

#include "rcr/errors.hpp"

namespace rcr {

ParameterBox::ParameterBox(Vec lo, Vec hi) : lower(lo), upper(hi) {
  if (lo.dim() != hi.dim()) throw InvalidConfig("box bounds have different dimensions");
  for (int i = 0; i < lo.dim(); ++i)
    if (!(lo[i] < hi[i])) throw InvalidConfig("box requires lower < upper componentwise");
}

bool ParameterBox::contains(const Vec& theta) const {
  if (theta.dim() != dim()) return false;
  for (int i = 0; i < dim(); ++i)
    if (theta[i] < lower[i] || theta[i] > upper[i]) return false;
  return true;
}

Vec ParameterBox::clamp(const Vec& theta, int* n_clamped) const {
  Vec out = theta;
  int moved = 0;
  for (int i = 0; i < dim(); ++i) {
    if (out[i] < lower[i]) {
      out[i] = lower[i];
      ++moved;
    } else if (out[i] > upper[i]) {
      out[i] = upper[i];
      ++moved;
    }
  }
  if (n_clamped) *n_clamped = moved;
  return out;
}

Vec ParameterBox::midpoint() const {
  Vec m(dim());
  for (int i = 0; i < dim(); ++i) m[i] = 0.5 * (lower[i] + upper[i]);
  return m;
}

GaussianAR1Model::GaussianAR1Model(double rho, ParameterBox box)
    : rho_(rho), box_(std::move(box)) {
  if (!(std::abs(rho) < 1.0)) throw InvalidConfig("AR(1) needs |rho| < 1");
  if (box_.dim() != 2) throw InvalidConfig("AR(1) parameter is (mu, sigma)");
  if (!(box_.lower[1] > 0.0)) throw InvalidConfig("sigma lower bound must be positive");
}

double GaussianAR1Model::log_transition_density(const Vec& theta, double x, double y) const {
  const double mu = theta[0], sigma = theta[1];
  const double one_minus_r2 = 1.0 - rho_ * rho_;
  const double yc = y - rho_ * x - (1.0 - rho_) * mu;
  return -0.5 * std::log(2.0 * M_PI) - 0.5 * std::log(one_minus_r2) - std::log(sigma) -
         yc * yc / (2.0 * sigma * sigma * one_minus_r2);
}

ScoreEval GaussianAR1Model::score_and_hessian(const Vec& theta, double x, double y) const {
  const double mu = theta[0], sigma = theta[1];
  const double s2 = sigma * sigma, s3 = s2 * sigma, s4 = s2 * s2;
  const double opr = 1.0 + rho_;
  const double one_minus_r2 = 1.0 - rho_ * rho_;
  const double yc = y - rho_ * x - (1.0 - rho_) * mu;

  ScoreEval ev;
  ev.psi = Vec(2);
  ev.psi[0] = yc / (s2 * opr);
  ev.psi[1] = -1.0 / sigma + yc * yc / (one_minus_r2 * s3);

  ev.big_psi = Mat(2);
  ev.big_psi(0, 0) = -(1.0 - rho_) / (opr * s2);
  ev.big_psi(0, 1) = -2.0 * yc / (opr * s3);
  ev.big_psi(1, 0) = ev.big_psi(0, 1);
  ev.big_psi(1, 1) = 1.0 / s2 - 3.0 * yc * yc / (one_minus_r2 * s4);
  return ev;
}

Mat GaussianAR1Model::fisher_information(const Vec& theta) const {
  const double sigma = theta[1];
  const double s2 = sigma * sigma;
  Mat fi(2);
  fi(0, 0) = (1.0 - rho_) / ((1.0 + rho_) * s2);
  fi(1, 1) = 2.0 / s2;
  return fi;
}

double GaussianAR1Model::transition_mean(const Vec& theta, double x) const {
  return rho_ * x + (1.0 - rho_) * theta[0];
}

double GaussianAR1Model::transition_from_gaussian(const Vec& theta, double x, double g) const {
  return transition_mean(theta, x) + theta[1] * std::sqrt(1.0 - rho_ * rho_) * g;
}

double GaussianAR1Model::sample_transition(const Vec& theta, double x, Rng& rng) const {
  return transition_from_gaussian(theta, x, rng.normal());
}

double GaussianAR1Model::sample_stationary_initial(const Vec& theta, Rng& rng) const {
  return theta[0] + theta[1] * rng.normal();
}

double GaussianAR1Model::beta_lower_bound() const {
  const double b1 = box_.lower[1], b2 = box_.upper[1];
  const double b2cubed = b2 * b2 * b2;
  return std::max(b2cubed / (4.0 * b1),
                  (1.0 + rho_) * b2cubed / (2.0 * (1.0 - rho_) * b1));
}

Vec GaussianAR1Model::conditional_score_mean(const Vec& theta, const Vec& theta_star) const {
  const double mu = theta[0], sigma = theta[1];
  const double mu_s = theta_star[0], sigma_s = theta_star[1];
  const double s2 = sigma * sigma, s3 = s2 * sigma;
  const double gap = mu - mu_s;
  Vec b(2);
  b[0] = -(1.0 - rho_) * gap / (s2 * (1.0 + rho_));
  b[1] = (sigma_s * sigma_s - s2) / s3 + (1.0 - rho_) * gap * gap / ((1.0 + rho_) * s3);
  return b;
}

std::array<double, 3> GaussianAR1Model::conditional_y_moments(const Vec& theta,
                                                              const Vec& theta_star) const {
  const double gap = theta_star[0] - theta[0];
  const double s2s = theta_star[1] * theta_star[1];
  const double omr = 1.0 - rho_;
  const double one_minus_r2 = 1.0 - rho_ * rho_;
  const double m1 = omr * gap;
  const double m2 = omr * omr * gap * gap + s2s * one_minus_r2;
  const double m4 = std::pow(omr, 4) * std::pow(gap, 4) +
                    6.0 * (1.0 + rho_) * std::pow(omr, 3) * gap * gap * s2s +
                    3.0 * s2s * s2s * one_minus_r2 * one_minus_r2;
  return {m1, m2, m4};
}

GaussianAR1Model make_iid_gaussian(ParameterBox box) {
  return GaussianAR1Model(0.0, std::move(box));
}

}  // namespace rcr
