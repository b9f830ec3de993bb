#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "rcr/diagnostics.hpp"
#include "rcr/experiment.hpp"
#include "rcr/errors.hpp"

using namespace rcr;

TEST_CASE("linear decomposition is exact at every streamed step") {
  const GaussianAR1Model model(-0.35, ParameterBox(Vec{-5.0, 0.5}, Vec{5.0, 2.0}));
  const EstimatorConfig cfg = make_estimator_config(model, 0.6, Vec{0.4, 1.1});
  const Vec theta_star{1.0, 1.0};
  Rng rng(11);

  EstimatorState st = init_estimator(model, cfg);
  double z = model.sample_stationary_initial(theta_star, rng);
  observe(st, model, cfg, z);
  Vec psi_sum(2);
  for (int i = 1; i <= 300; ++i) {
    const double z_next = model.sample_transition(theta_star, z, rng);
    refined_step(st, model, cfg, z_next);
    psi_sum += model.score_and_hessian(theta_star, z, z_next).psi;
    z = z_next;

    const AsymptoticDiagnostics diag = linearization_diagnostics(st, model, theta_star, psi_sum);
    // Rebuild every term independently of the diagnostics path.
    const Mat g = spd_inverse(model.fisher_information(st.theta_tilde));
    const Vec centering = centering_oracle(st, model, theta_star);
    const Vec reconstructed =
        centering + (1.0 / static_cast<double>(i)) * (g * psi_sum) + diag.residual;
    for (int c = 0; c < 2; ++c)
      CHECK(std::abs(st.theta_hat[c] - reconstructed[c]) <=
            1e-12 * std::max(1.0, std::abs(st.theta_hat[c])));
    CHECK(diag.n == i);
    CHECK(diag.delta_norm == doctest::Approx((st.theta_tilde - theta_star).norm()));
  }
}

TEST_CASE("one-step residual vanishes in the worked example") {
  const GaussianAR1Model model(0.0, ParameterBox(Vec{-5.0, 0.1}, Vec{5.0, 4.0}));
  const EstimatorConfig cfg = make_estimator_config(model, 0.5, Vec{0.0, 1.0});
  EstimatorState st = init_estimator(model, cfg);
  observe(st, model, cfg, 0.0);
  refined_step(st, model, cfg, 1.0);

  const Vec theta_star{0.0, 1.0};
  const Vec psi_star = model.score_and_hessian(theta_star, 0.0, 1.0).psi;
  CHECK(psi_star[0] == doctest::Approx(1.0));
  CHECK(psi_star[1] == doctest::Approx(0.0));

  const AsymptoticDiagnostics diag = linearization_diagnostics(st, model, theta_star, psi_star);
  CHECK(diag.centering[0] == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(diag.centering[1] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(diag.linearization_residual <= 1e-12);
}

TEST_CASE("exact-limit stub reduces the residual to the refined-point error") {
  const GaussianAR1Model model(0.0, ParameterBox(Vec{-5.0, 0.1}, Vec{5.0, 4.0}));
  const Vec theta_star{0.3, 1.4};
  EstimatorState st;
  st.n = 50;
  st.theta_tilde = theta_star;
  st.hessian_avg = (-1.0) * model.fisher_information(theta_star);
  st.theta_hat = Vec{0.5, 1.1};
  st.theta_hat_valid = true;

  const AsymptoticDiagnostics diag =
      linearization_diagnostics(st, model, theta_star, Vec{0.0, 0.0});
  CHECK(diag.linearization_residual ==
        doctest::Approx((st.theta_hat - theta_star).norm()).epsilon(1e-12));
  CHECK(diag.delta_norm == 0.0);
  CHECK(diag.hessian_avg_drift <= 1e-15);
}

TEST_CASE("assumption report finds the root and stable ratios") {
  const GaussianAR1Model model(-0.35, ParameterBox(Vec{-3.0, 0.5}, Vec{3.0, 2.0}));
  const Vec theta_star{1.0, 1.0};
  AssumptionReportOptions opt;
  opt.grid_points = 11;
  opt.mc_draws = 4000;
  opt.lipschitz_pairs = 400;
  opt.supremum_reps = 8;
  opt.seed = 5;
  const nlohmann::json report = assumption_report(model, theta_star, opt);

  CHECK(report["score_mean_root"]["within_one_cell_of_true"].get<bool>());
  // The grid minimum is bounded by the score-mean variation over one cell.
  CHECK(report["score_mean_root"]["min_norm"].get<double>() < 0.5);

  const double ratio = report["score_second_moment_ratio"]["max_ratio"].get<double>();
  CHECK(ratio > 0.0);
  CHECK(std::isfinite(ratio));
  CHECK(report["score_second_moment_ratio"]["relative_change"].get<double>() < 0.10);

  CHECK(report["score_mean_lipschitz"]["max_ratio"].get<double>() > 0.0);
  CHECK(report["score_supremum_trend_decreasing"].get<bool>());
}

TEST_CASE("hessian average drift and scaled residual shrink along the stream") {
  // Medians over 30 replications at checkpoints 1e3, 1e4, 1e5: the running
  // Hessian average approaches -I(theta*) and sqrt(n) times the
  // linearization residual decays.
  const ExperimentConfig cfg = default_experiment_config();
  const GaussianAR1Model model = make_model(cfg);
  const EstimatorConfig ecfg = make_estimator_config(cfg, model);
  const Vec theta_star = theta_star_of(cfg);
  const std::vector<long> cps{1000, 10000, 100000};
  const int reps = 30;
  std::vector<std::vector<double>> drift(cps.size()), scaled(cps.size());
  for (auto& v : drift) v.resize(reps);
  for (auto& v : scaled) v.resize(reps);

  parallel_for(reps, [&](int rep) {
    Rng rng(replication_seed(606, static_cast<std::uint64_t>(rep)));
    EstimatorState st = init_estimator(model, ecfg);
    double z = model.sample_stationary_initial(theta_star, rng);
    observe(st, model, ecfg, z);
    Vec psi_sum(2);
    std::size_t cp = 0;
    for (long i = 1; i <= cps.back(); ++i) {
      const double z_next = model.sample_transition(theta_star, z, rng);
      refined_step(st, model, ecfg, z_next);
      psi_sum += model.score_and_hessian(theta_star, z, z_next).psi;
      z = z_next;
      if (cp < cps.size() && i == cps[cp]) {
        const AsymptoticDiagnostics d = linearization_diagnostics(st, model, theta_star, psi_sum);
        drift[cp][rep] = d.hessian_avg_drift;
        scaled[cp][rep] = std::sqrt(static_cast<double>(i)) * d.linearization_residual;
        ++cp;
      }
    }
  });

  auto median = [](std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    return xs[xs.size() / 2];
  };
  double prev_drift = 1e18, prev_scaled = 1e18;
  for (std::size_t k = 0; k < cps.size(); ++k) {
    const double d = median(drift[k]);
    const double s = median(scaled[k]);
    CHECK(d < prev_drift);
    CHECK(s < prev_scaled);
    prev_drift = d;
    prev_scaled = s;
  }
  CHECK(prev_drift < 0.05);  // final checkpoint, n = 1e5
}

TEST_CASE("diagnostics preconditions") {
  const GaussianAR1Model model(0.0, ParameterBox(Vec{-5.0, 0.1}, Vec{5.0, 4.0}));
  EstimatorState st;  // n = 0
  CHECK_THROWS_AS(linearization_diagnostics(st, model, Vec{0.0, 1.0}, Vec{0.0, 0.0}),
                  InvalidConfig);
}
