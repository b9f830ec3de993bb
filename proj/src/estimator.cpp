#include "rcr/estimator.hpp"

#include <cmath>

#include "rcr/errors.hpp"

namespace rcr {

EstimatorConfig make_estimator_config(const MarkovModel& model, std::optional<double> beta,
                                      std::optional<Vec> theta0, Projection projection) {
  EstimatorConfig cfg;
  const double bound = model.beta_lower_bound();
  cfg.beta = beta.value_or(1.05 * bound);
  if (!(cfg.beta > 0.0)) throw InvalidConfig("beta must be positive");
  cfg.beta_honors_bound = cfg.beta > bound;
  cfg.theta0 = theta0.value_or(model.box().midpoint());
  if (cfg.theta0.dim() != model.dim()) throw InvalidConfig("theta0 has wrong dimension");
  if (!model.box().contains(cfg.theta0)) throw InvalidConfig("theta0 outside the parameter box");
  cfg.projection = projection;
  return cfg;
}

EstimatorState init_estimator(const MarkovModel& model, const EstimatorConfig& config) {
  if (!(config.beta > 0.0)) throw InvalidConfig("beta must be positive");
  if (!model.box().contains(config.theta0)) throw InvalidConfig("theta0 outside the parameter box");
  EstimatorState st;
  st.theta_tilde = config.theta0;
  st.hessian_avg = Mat::zeros(model.dim());
  st.score_accum = Vec::zeros(model.dim());
  st.theta_hat = Vec::zeros(model.dim());
  return st;
}

namespace {

Vec advance_theta_tilde(const Vec& theta, const Vec& psi, double beta, long n,
                        const ParameterBox& box, Projection projection, bool* projected) {
  Vec raw = theta + (beta / static_cast<double>(n)) * psi;
  if (projection == Projection::none) {
    if (projected) *projected = false;
    return raw;
  }
  int moved = 0;
  Vec out = box.clamp(raw, &moved);
  if (projected) *projected = moved > 0;
  return out;
}

}  // namespace

Vec base_step(const EstimatorState& state, const MarkovModel& model,
              const EstimatorConfig& config, double z_new, bool* projected) {
  if (!state.has_z_prev) throw InvalidConfig("base_step before the stream was seeded");
  const Vec psi = model.score_and_hessian(state.theta_tilde, state.z_prev, z_new).psi;
  return advance_theta_tilde(state.theta_tilde, psi, config.beta, state.n + 1, model.box(),
                             config.projection, projected);
}

StepRecord refined_step(EstimatorState& state, const MarkovModel& model,
                     const EstimatorConfig& config, double z_new) {
  if (!state.has_z_prev) throw InvalidConfig("refined_step before the stream was seeded");
  const long n = state.n + 1;
  const double inv_n = 1.0 / static_cast<double>(n);

  StepRecord rec;
  rec.n = n;
  rec.theta_tilde_before = state.theta_tilde;

  const ScoreEval ev = model.score_and_hessian(state.theta_tilde, state.z_prev, z_new);
  rec.psi = ev.psi;
  rec.big_psi = ev.big_psi;

  // H_n = ((n-1)/n) H_{n-1} + (1/n) Psi_n
  state.hessian_avg += inv_n * (ev.big_psi + (-1.0) * state.hessian_avg);
  // G_n = ((n-1)/n) G_{n-1} + (1/n) (Id + beta H_n) psi_n
  const Vec correction = ev.psi + config.beta * (state.hessian_avg * ev.psi);
  state.score_accum += inv_n * (correction - state.score_accum);

  bool projected = false;
  state.theta_tilde = advance_theta_tilde(state.theta_tilde, ev.psi, config.beta, n, model.box(),
                                          config.projection, &projected);
  if (projected) ++state.projections;

  // theta_hat_n = I(theta_tilde_n)^{-1} (G_n - H_n theta_tilde_n)
  const Mat fisher_inv = spd_inverse(model.fisher_information(state.theta_tilde));
  state.theta_hat = fisher_inv * (state.score_accum - state.hessian_avg * state.theta_tilde);
  state.theta_hat_valid = true;

  state.n = n;
  state.z_prev = z_new;

  rec.theta_tilde_after = state.theta_tilde;
  rec.theta_hat_after = state.theta_hat;
  rec.projected = projected;
  return rec;
}

void observe(EstimatorState& state, const MarkovModel& model, const EstimatorConfig& config,
             double z) {
  if (!state.has_z_prev) {
    state.z_prev = z;
    state.has_z_prev = true;
    return;
  }
  refined_step(state, model, config, z);
}

Vec centering_oracle(const EstimatorState& state, const MarkovModel& model,
                    const Vec& theta_star) {
  if (state.n < 1) throw InvalidConfig("centering_oracle needs at least one transition");
  const Mat fisher_inv = spd_inverse(model.fisher_information(state.theta_tilde));
  return -1.0 * (fisher_inv * (state.hessian_avg * theta_star));
}

double u_statistic(const EstimatorState& state, const MarkovModel& model, const Vec& theta) {
  if (!state.theta_hat_valid) throw InvalidConfig("u_statistic before the first transition");
  const Mat l = cholesky(model.fisher_information(state.theta_tilde));
  const Vec diff = state.theta_hat - theta;
  // n |L^T diff|^2
  const int d = l.dim();
  double sum = 0.0;
  for (int i = 0; i < d; ++i) {
    double s = 0.0;
    for (int j = i; j < d; ++j) s += l(j, i) * diff[j];
    sum += s * s;
  }
  return static_cast<double>(state.n) * sum;
}

}  // namespace rcr
