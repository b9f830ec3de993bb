#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rcr/estimator.hpp"
#include "rcr/model.hpp"

namespace rcr {

/// One experiment definition: model, true parameter, estimator settings,
/// run length, replication count, significance level and seeding. Parsed
/// from a flat `key = value` file; unknown keys are a hard error.
///
/// Accepted keys: model.rho, model.mu_star, model.sigma_star,
/// box.a1, box.a2 (mu interval), box.b1, box.b2 (sigma interval),
/// beta (number or "auto"), theta0 ("mu,sigma" or "midpoint"),
/// n, reps, alpha, seed, out, stride, grid ("mu,sigma;mu,sigma;..."),
/// diagnostics (true/false).
struct ExperimentConfig {
  double rho = -0.35;
  double mu_star = 0.0;
  double sigma_star = 1.0;
  double a1 = -5.0, a2 = 5.0;   // mu bounds
  double b1 = 0.88, b2 = 1.12;  // sigma bounds
  std::optional<double> beta;   // nullopt = auto (1.05 x model bound)
  std::optional<std::array<double, 2>> theta0 = {{0.0, 1.12}};  // nullopt = midpoint
  long n = 10000;
  int reps = 200;
  double alpha = 0.05;
  std::uint64_t seed = 42;
  std::string out;
  long stride = 1;
  std::vector<std::array<double, 2>> grid;  // ergodic evaluation points; empty = default
  bool diagnostics = false;
};

/// The default experiment. Anticorrelated chain with a tight scale box so
/// the auto step scale stays small enough for the finite-sample experiments
/// while honoring the model's beta bound.
ExperimentConfig default_experiment_config();

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

/// Throws InvalidConfig on violated constraints (bounds ordering, alpha
/// range, theta0/theta* outside the box, ...).
void validate_config(const ExperimentConfig& config);

GaussianAR1Model make_model(const ExperimentConfig& config);
EstimatorConfig make_estimator_config(const ExperimentConfig& config, const MarkovModel& model);
Vec theta_star_of(const ExperimentConfig& config);

/// Ergodic grid: configured points, or the default 5-point set around
/// theta* (mu offsets +-0.5 and +-0.2 at sigma*).
std::vector<Vec> ergodic_grid(const ExperimentConfig& config);

}  // namespace rcr
