#include "rcr/diagnostics.hpp"

#include <cmath>
#include <vector>

#include <nlohmann/json.hpp>

#include "rcr/errors.hpp"

namespace rcr {

using nlohmann::json;

AsymptoticDiagnostics linearization_diagnostics(const EstimatorState& state,
                                                const MarkovModel& model,
                                                const Vec& theta_star,
                                                const Vec& psi_sum_at_star) {
  if (state.n < 1 || !state.theta_hat_valid)
    throw InvalidConfig("linearization_diagnostics needs at least one transition");

  AsymptoticDiagnostics diag;
  diag.n = state.n;
  diag.delta_norm = (state.theta_tilde - theta_star).norm();
  diag.centering = centering_oracle(state, model, theta_star);

  const Mat g = spd_inverse(model.fisher_information(state.theta_tilde));
  const Vec linear_term = (1.0 / static_cast<double>(state.n)) * (g * psi_sum_at_star);
  diag.residual = state.theta_hat - diag.centering - linear_term;
  diag.linearization_residual = diag.residual.norm();
  diag.hessian_avg_drift = (state.hessian_avg + model.fisher_information(theta_star)).max_abs();
  return diag;
}

namespace {

// E[|psi(theta)|^2 | previous state] by Monte Carlo over the innovation.
// For this kernel the conditional law of Y = Z_n - rho Z_{n-1} - (1-rho)mu
// does not depend on the previous state, so one set of draws serves every x.
double score_second_moment(const GaussianAR1Model& model, const Vec& theta,
                           const Vec& theta_star, int draws, Rng& rng) {
  const double rho = model.rho();
  const double mean_y = (1.0 - rho) * (theta_star[0] - theta[0]);
  const double sd_y = theta_star[1] * std::sqrt(1.0 - rho * rho);
  const double sigma = theta[1];
  const double s2 = sigma * sigma, s3 = s2 * sigma;
  const double one_minus_r2 = 1.0 - rho * rho;
  double acc = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double y = mean_y + sd_y * rng.normal();
    const double psi1 = y / (s2 * (1.0 + rho));
    const double psi2 = -1.0 / sigma + y * y / (one_minus_r2 * s3);
    acc += psi1 * psi1 + psi2 * psi2;
  }
  return acc / draws;
}

struct GridScan {
  double max_ratio = 0.0;
  Vec argmin_root;
  double min_root_norm = 0.0;
  bool root_within_one_cell = false;
};

GridScan scan_grid(const GaussianAR1Model& model, const Vec& theta_star, int grid_points,
                   int draws, Rng& rng) {
  const ParameterBox& box = model.box();
  GridScan out;
  out.min_root_norm = std::numeric_limits<double>::infinity();
  const double dmu = (box.upper[0] - box.lower[0]) / (grid_points - 1);
  const double dsg = (box.upper[1] - box.lower[1]) / (grid_points - 1);
  for (int i = 0; i < grid_points; ++i) {
    for (int j = 0; j < grid_points; ++j) {
      Vec theta{box.lower[0] + i * dmu, box.lower[1] + j * dsg};
      const double bnorm = model.conditional_score_mean(theta, theta_star).norm();
      if (bnorm < out.min_root_norm) {
        out.min_root_norm = bnorm;
        out.argmin_root = theta;
      }
      const double m2 = score_second_moment(model, theta, theta_star, draws, rng);
      const double gap2 = (theta - theta_star).dot(theta - theta_star);
      out.max_ratio = std::max(out.max_ratio, m2 / (1.0 + gap2));
    }
  }
  out.root_within_one_cell = std::abs(out.argmin_root[0] - theta_star[0]) <= dmu + 1e-12 &&
                             std::abs(out.argmin_root[1] - theta_star[1]) <= dsg + 1e-12;
  return out;
}

}  // namespace

json assumption_report(const GaussianAR1Model& model, const Vec& theta_star,
                       const AssumptionReportOptions& options) {
  if (options.grid_points < 3) throw InvalidConfig("assumption_report: grid too small");
  if (!model.box().contains(theta_star)) throw InvalidConfig("theta_star outside the box");
  Rng rng(options.seed);

  json report;
  report["schema_version"] = 1;

  // Unique root of the conditional score mean near theta*.
  const GridScan base = scan_grid(model, theta_star, options.grid_points, options.mc_draws, rng);
  const GridScan dense =
      scan_grid(model, theta_star, 2 * options.grid_points - 1, options.mc_draws, rng);
  report["score_mean_root"] = {
      {"grid_points", options.grid_points},
      {"argmin", {base.argmin_root[0], base.argmin_root[1]}},
      {"min_norm", base.min_root_norm},
      {"within_one_cell_of_true", base.root_within_one_cell},
  };

  // Bounded ratio E|psi(theta)|^2 / (1 + |theta - theta*|^2), with a
  // doubled-grid stability probe.
  report["score_second_moment_ratio"] = {
      {"max_ratio", base.max_ratio},
      {"max_ratio_doubled_grid", dense.max_ratio},
      {"relative_change", std::abs(dense.max_ratio - base.max_ratio) /
                              std::max(base.max_ratio, 1e-300)},
  };

  // Lipschitz ratio of the conditional score mean over random pairs.
  double lip = 0.0;
  const ParameterBox& box = model.box();
  for (int k = 0; k < options.lipschitz_pairs; ++k) {
    Vec t1{box.lower[0] + (box.upper[0] - box.lower[0]) * rng.uniform(),
           box.lower[1] + (box.upper[1] - box.lower[1]) * rng.uniform()};
    Vec t2{box.lower[0] + (box.upper[0] - box.lower[0]) * rng.uniform(),
           box.lower[1] + (box.upper[1] - box.lower[1]) * rng.uniform()};
    const double gap = (t1 - t2).norm();
    if (gap < 1e-9) continue;
    const double diff =
        (model.conditional_score_mean(t1, theta_star) - model.conditional_score_mean(t2, theta_star))
            .norm();
    lip = std::max(lip, diff / gap);
  }
  report["score_mean_lipschitz"] = {{"max_ratio", lip},
                                    {"pairs", options.lipschitz_pairs}};

  // Trend of E[max_{i<=n} |psi_i(theta*)|] / sqrt(n) along simulated chains.
  json trend = json::array();
  std::vector<long> lengths = {1000, 10000, 100000};
  for (long n : lengths) {
    double acc = 0.0;
    for (int rep = 0; rep < options.supremum_reps; ++rep) {
      Rng chain_rng(replication_seed(options.seed + 0x9e3779b9u, static_cast<std::uint64_t>(rep)));
      double z_prev = model.sample_stationary_initial(theta_star, chain_rng);
      double running_max = 0.0;
      for (long i = 0; i < n; ++i) {
        const double z = model.sample_transition(theta_star, z_prev, chain_rng);
        running_max = std::max(
            running_max, model.score_and_hessian(theta_star, z_prev, z).psi.norm());
        z_prev = z;
      }
      acc += running_max / std::sqrt(static_cast<double>(n));
    }
    trend.push_back({{"n", n}, {"mean_sup_ratio", acc / options.supremum_reps}});
  }
  report["score_supremum_trend"] = trend;
  bool decreasing = true;
  for (std::size_t i = 1; i < trend.size(); ++i)
    if (!(trend[i]["mean_sup_ratio"].get<double>() <
          trend[i - 1]["mean_sup_ratio"].get<double>()))
      decreasing = false;
  report["score_supremum_trend_decreasing"] = decreasing;
  return report;
}

}  // namespace rcr
