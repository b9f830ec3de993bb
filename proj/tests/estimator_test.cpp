#include <doctest.h>

#include <cmath>
#include <vector>

#include "rcr/errors.hpp"
#include "rcr/estimator.hpp"

using namespace rcr;

namespace {

GaussianAR1Model iid_unit_box() {
  return GaussianAR1Model(0.0, ParameterBox(Vec{-5.0, 0.1}, Vec{5.0, 4.0}));
}

EstimatorConfig config_with(const MarkovModel& model, double beta, Vec theta0) {
  return make_estimator_config(model, beta, theta0);
}

}  // namespace

TEST_CASE("init zeroes the averages and places theta0") {
  const GaussianAR1Model model = iid_unit_box();
  const EstimatorConfig cfg = config_with(model, 0.5, Vec{0.0, 1.0});
  const EstimatorState st = init_estimator(model, cfg);
  CHECK(st.n == 0);
  CHECK(st.hessian_avg.max_abs() == 0.0);
  CHECK(st.score_accum.max_abs() == 0.0);
  CHECK(st.theta_tilde[0] == 0.0);
  CHECK(st.theta_tilde[1] == 1.0);
  CHECK_FALSE(st.theta_hat_valid);
}

TEST_CASE("config validation") {
  const GaussianAR1Model model = iid_unit_box();
  CHECK_THROWS_AS(make_estimator_config(model, 0.0), InvalidConfig);
  CHECK_THROWS_AS(make_estimator_config(model, -1.0), InvalidConfig);
  CHECK_THROWS_AS(make_estimator_config(model, 1.0, Vec{99.0, 1.0}), InvalidConfig);

  // Unspecified theta0 defaults to the box midpoint.
  const EstimatorConfig def = make_estimator_config(model, 1.0);
  CHECK(def.theta0[0] == doctest::Approx(0.0));
  CHECK(def.theta0[1] == doctest::Approx(2.05));

  // Unspecified beta resolves to 1.05 x the model bound.
  const EstimatorConfig aut = make_estimator_config(model);
  CHECK(aut.beta == doctest::Approx(1.05 * model.beta_lower_bound()));
  CHECK(aut.beta_honors_bound);

  const EstimatorConfig low = make_estimator_config(model, 0.01);
  CHECK_FALSE(low.beta_honors_bound);  // allowed, but recorded
}

TEST_CASE("base_step worked example") {
  const GaussianAR1Model model = iid_unit_box();
  const EstimatorConfig cfg = config_with(model, 0.5, Vec{0.0, 1.0});
  EstimatorState st = init_estimator(model, cfg);
  observe(st, model, cfg, 0.0);  // Z_0 seeds only
  CHECK(st.n == 0);
  bool projected = true;
  const Vec next = base_step(st, model, cfg, 1.0, &projected);
  CHECK(next[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(next[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_FALSE(projected);
}

TEST_CASE("base_step clamps to the box and counts the projection") {
  const GaussianAR1Model model(0.0, ParameterBox(Vec{-5.0, 0.5}, Vec{5.0, 2.0}));
  const EstimatorConfig cfg = config_with(model, 2.0, Vec{0.0, 1.0});
  EstimatorState st = init_estimator(model, cfg);
  observe(st, model, cfg, 0.0);
  // psi = (0, -1): raw sigma update 1 - 2 = -1, clamped to the floor.
  bool projected = false;
  const Vec next = base_step(st, model, cfg, 0.0, &projected);
  CHECK(next[1] == 0.5);
  CHECK(projected);

  refined_step(st, model, cfg, 0.0);
  CHECK(st.projections == 1);
  CHECK(st.theta_tilde[1] == 0.5);
}

TEST_CASE("base_step fixed points per component") {
  const GaussianAR1Model model = iid_unit_box();
  const EstimatorConfig cfg = config_with(model, 0.7, Vec{0.3, 1.2});
  EstimatorState st = init_estimator(model, cfg);
  observe(st, model, cfg, 0.0);

  // Y = 0 (observation at the conditional mean): mu does not move.
  const Vec at_mean = base_step(st, model, cfg, 0.3);
  CHECK(at_mean[0] == doctest::Approx(0.3).epsilon(1e-15));

  // Y^2 = sigma^2: the sigma component of the score vanishes.
  const Vec at_sd = base_step(st, model, cfg, 0.3 + 1.2);
  CHECK(at_sd[1] == doctest::Approx(1.2).epsilon(1e-15));
}

TEST_CASE("refined_step worked example at n = 1") {
  const GaussianAR1Model model = iid_unit_box();
  const EstimatorConfig cfg = config_with(model, 0.5, Vec{0.0, 1.0});
  EstimatorState st = init_estimator(model, cfg);
  observe(st, model, cfg, 0.0);
  const StepRecord rec = refined_step(st, model, cfg, 1.0);

  CHECK(st.n == 1);
  CHECK(st.hessian_avg(0, 0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(st.hessian_avg(0, 1) == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(st.hessian_avg(1, 1) == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(st.score_accum[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(st.score_accum[1] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(st.theta_tilde[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(st.theta_tilde[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(st.theta_hat[0] == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(st.theta_hat[1] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(rec.projected == false);
  CHECK(rec.psi[0] == doctest::Approx(1.0));
  CHECK(rec.psi[1] == doctest::Approx(0.0));

  // The refined point may leave the box; it is a read-out, not state.
  CHECK(st.theta_hat[0] > model.box().lower[0]);
}

TEST_CASE("streaming equals batch summation forms") {
  const GaussianAR1Model model(-0.35, ParameterBox(Vec{-5.0, 0.5}, Vec{5.0, 2.0}));
  const EstimatorConfig cfg = config_with(model, 0.6, Vec{0.4, 1.1});
  Rng rng(321);
  const Vec theta_star{1.0, 1.0};

  EstimatorState st = init_estimator(model, cfg);
  double z = model.sample_stationary_initial(theta_star, rng);
  observe(st, model, cfg, z);

  // Batch accumulators rebuilt from the audit records.
  std::vector<StepRecord> records;
  for (int i = 1; i <= 500; ++i) {
    z = model.sample_transition(theta_star, z, rng);
    records.push_back(refined_step(st, model, cfg, z));
  }

  Mat psi_sum(2);
  Vec gamma_sum(2);
  std::vector<Mat> h_history;
  for (const auto& rec : records) {
    psi_sum += rec.big_psi;
    h_history.push_back(psi_sum);  // n H_n = sum of Psi_i
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    const Mat h_i = (1.0 / static_cast<double>(i + 1)) * h_history[i];
    gamma_sum += records[i].psi + cfg.beta * (h_i * records[i].psi);
  }
  const double n = static_cast<double>(records.size());
  const Mat h_batch = (1.0 / n) * psi_sum;
  const Vec g_batch = (1.0 / n) * gamma_sum;

  for (int i = 0; i < 2; ++i) {
    CHECK(st.score_accum[i] ==
          doctest::Approx(g_batch[i]).epsilon(1e-12));
    for (int j = 0; j < 2; ++j)
      CHECK(st.hessian_avg(i, j) == doctest::Approx(h_batch(i, j)).epsilon(1e-12));
  }
  CHECK(st.hessian_avg.asymmetry() <= 1e-12);
}

TEST_CASE("restreaming a fixed sequence reproduces the state exactly") {
  const GaussianAR1Model model = iid_unit_box();
  const EstimatorConfig cfg = config_with(model, 0.5, Vec{0.0, 1.0});
  const std::vector<double> zs{0.0, 1.0, 1.0};

  EstimatorState a = init_estimator(model, cfg);
  for (double z : zs) observe(a, model, cfg, z);
  EstimatorState b = init_estimator(model, cfg);
  for (double z : zs) observe(b, model, cfg, z);

  CHECK(a.n == 2);
  for (int i = 0; i < 2; ++i) {
    CHECK(a.theta_tilde[i] == b.theta_tilde[i]);
    CHECK(a.theta_hat[i] == b.theta_hat[i]);
    CHECK(a.score_accum[i] == b.score_accum[i]);
    for (int j = 0; j < 2; ++j) CHECK(a.hessian_avg(i, j) == b.hessian_avg(i, j));
  }
}

TEST_CASE("refined_step before seeding is an error") {
  const GaussianAR1Model model = iid_unit_box();
  const EstimatorConfig cfg = config_with(model, 0.5, Vec{0.0, 1.0});
  EstimatorState st = init_estimator(model, cfg);
  CHECK_THROWS_AS(refined_step(st, model, cfg, 1.0), InvalidConfig);
  CHECK_THROWS_AS(base_step(st, model, cfg, 1.0), InvalidConfig);
}

TEST_CASE("centering oracle identities") {
  const GaussianAR1Model model = iid_unit_box();
  const EstimatorConfig cfg = config_with(model, 0.5, Vec{0.0, 1.0});

  // If H_n = -I(theta_tilde) exactly, the centering returns theta* as is.
  EstimatorState st = init_estimator(model, cfg);
  st.n = 10;
  st.theta_tilde = Vec{0.7, 1.3};
  st.hessian_avg = (-1.0) * model.fisher_information(st.theta_tilde);
  const Vec theta_star{0.2, 2.0};
  const Vec v = centering_oracle(st, model, theta_star);
  CHECK(v[0] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(v[1] == doctest::Approx(2.0).epsilon(1e-12));

  // Zero true parameter maps to zero by linearity.
  const Vec zero = centering_oracle(st, model, Vec{0.0, 0.0});
  CHECK(zero.max_abs() == 0.0);

  // Worked n = 1 state.
  EstimatorState one = init_estimator(model, cfg);
  observe(one, model, cfg, 0.0);
  refined_step(one, model, cfg, 1.0);
  const Vec v1 = centering_oracle(one, model, Vec{0.0, 1.0});
  CHECK(v1[0] == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(v1[1] == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("u_statistic worked values and scaling") {
  const GaussianAR1Model model = iid_unit_box();
  EstimatorState st;
  st.n = 4;
  st.theta_tilde = Vec{0.0, 1.0};  // I = diag(1, 2)
  st.theta_hat = Vec{1.0, 1.0};
  st.theta_hat_valid = true;

  CHECK(u_statistic(st, model, st.theta_hat) == 0.0);
  CHECK(u_statistic(st, model, Vec{0.0, 1.0}) == doctest::Approx(4.0).epsilon(1e-13));

  EstimatorState st4 = st;
  st4.n = 16;
  CHECK(u_statistic(st4, model, Vec{0.0, 1.0}) ==
        doctest::Approx(4.0 * u_statistic(st, model, Vec{0.0, 1.0})).epsilon(1e-13));
}
