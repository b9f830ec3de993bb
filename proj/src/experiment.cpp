#include "rcr/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "rcr/diagnostics.hpp"
#include "rcr/errors.hpp"
#include "rcr/stats.hpp"

namespace rcr {

using nlohmann::json;

namespace {

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.dim(); ++i) a.push_back(v[i]);
  return a;
}

json lower_triangle_to_json(const Mat& l) {
  json rows = json::array();
  for (int i = 0; i < l.dim(); ++i) {
    json row = json::array();
    for (int j = 0; j < l.dim(); ++j) row.push_back(l(i, j));
    rows.push_back(row);
  }
  return rows;
}

json config_echo(const ExperimentConfig& cfg, const GaussianAR1Model& model,
                 const EstimatorConfig& ecfg) {
  return json{{"model", {{"rho", cfg.rho}, {"mu_star", cfg.mu_star}, {"sigma_star", cfg.sigma_star}}},
              {"box", {{"a1", cfg.a1}, {"a2", cfg.a2}, {"b1", cfg.b1}, {"b2", cfg.b2}}},
              {"beta", ecfg.beta},
              {"beta_lower_bound", model.beta_lower_bound()},
              {"beta_honors_bound", ecfg.beta_honors_bound},
              {"theta0", vec_to_json(ecfg.theta0)},
              {"n", cfg.n},
              {"reps", cfg.reps},
              {"alpha", cfg.alpha},
              {"seed", cfg.seed}};
}

}  // namespace

std::vector<double> simulate_chain(const GaussianAR1Model& model, const Vec& theta_star,
                                   long n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> chain;
  chain.reserve(static_cast<std::size_t>(n) + 1);
  double z = model.sample_stationary_initial(theta_star, rng);
  chain.push_back(z);
  for (long i = 0; i < n; ++i) {
    z = model.sample_transition(theta_star, z, rng);
    chain.push_back(z);
  }
  return chain;
}

std::string chain_to_csv(std::span<const double> chain) {
  std::string out = "step,z\n";
  for (std::size_t i = 0; i < chain.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += format_double(chain[i]);
    out += '\n';
  }
  return out;
}

std::vector<double> parse_chain_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("line 1: empty chain file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "step,z") throw ParseError("line 1: expected header 'step,z'");
  std::vector<double> chain;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ParseError("line " + std::to_string(lineno) + ": expected 'step,z'");
    long step = 0;
    const auto sres = std::from_chars(line.data(), line.data() + comma, step);
    if (sres.ec != std::errc() || sres.ptr != line.data() + comma)
      throw ParseError("line " + std::to_string(lineno) + ": bad step index");
    if (step != static_cast<long>(chain.size()))
      throw ParseError("line " + std::to_string(lineno) + ": steps must increase from 0");
    double z = 0.0;
    const char* vbegin = line.data() + comma + 1;
    const char* vend = line.data() + line.size();
    const auto vres = std::from_chars(vbegin, vend, z);
    if (vres.ec != std::errc() || vres.ptr != vend)
      throw ParseError("line " + std::to_string(lineno) + ": bad z value");
    chain.push_back(z);
  }
  if (chain.empty()) throw ParseError("line 1: chain file has no observations");
  return chain;
}

std::string run_estimates_csv(const ExperimentConfig& cfg, std::span<const double> chain) {
  const GaussianAR1Model model = make_model(cfg);
  const EstimatorConfig ecfg = make_estimator_config(cfg, model);
  EstimatorState state = init_estimator(model, ecfg);

  std::string out = "n,mu_tilde,sigma_tilde,mu_hat,sigma_hat,projected\n";
  for (double z : chain) {
    if (!state.has_z_prev) {
      observe(state, model, ecfg, z);
      continue;
    }
    const StepRecord rec = refined_step(state, model, ecfg, z);
    out += std::to_string(rec.n);
    out += ',';
    out += format_double(rec.theta_tilde_after[0]);
    out += ',';
    out += format_double(rec.theta_tilde_after[1]);
    out += ',';
    out += format_double(rec.theta_hat_after[0]);
    out += ',';
    out += format_double(rec.theta_hat_after[1]);
    out += ',';
    out += rec.projected ? '1' : '0';
    out += '\n';
  }
  out += "# steps=" + std::to_string(state.n) + " projections=" + std::to_string(state.projections) +
         " beta=" + format_double(ecfg.beta) +
         " beta_honors_bound=" + (ecfg.beta_honors_bound ? "true" : "false") + "\n";
  return out;
}

namespace {

json region_to_json(const ConfidenceRegion& region, const GaussianAR1Model& model,
                    const Vec& theta_star) {
  json points = json::array();
  for (const Vec& p : region.extreme_points) points.push_back(vec_to_json(p));
  return json{{"n", region.n},
              {"alpha", region.alpha},
              {"kappa", region.kappa},
              {"center", vec_to_json(region.center)},
              {"L", lower_triangle_to_json(region.chol_lower)},
              {"extreme_points", points},
              {"diameter", region_diameter(region)},
              {"contains_true", region_contains(region, model, theta_star)},
              {"extreme_point_outside_box", region.extreme_point_outside_box}};
}

}  // namespace

std::string run_regions_jsonl(const ExperimentConfig& cfg, std::span<const double> chain) {
  const GaussianAR1Model model = make_model(cfg);
  const EstimatorConfig ecfg = make_estimator_config(cfg, model);
  const Vec theta_star = theta_star_of(cfg);
  RegionStreamState stream = make_region_stream(model, ecfg, cfg.alpha);

  std::string out;
  for (double z : chain) {
    region_step(stream, model, ecfg, z);
    if (stream.region && stream.estimator.n % cfg.stride == 0)
      out += region_to_json(*stream.region, model, theta_star).dump() + "\n";
  }
  return out;
}

void parallel_for(int count, const std::function<void(int)>& fn, int max_workers) {
  if (count <= 0) return;
  const unsigned hw =
      max_workers > 0 ? static_cast<unsigned>(max_workers)
                      : std::max(1u, std::thread::hardware_concurrency());
  const int workers = static_cast<int>(std::min<long>(hw, count));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t m = x.size();
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (m > 2) {
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      ss += r * r;
    }
    fit.slope_stderr = std::sqrt(ss / static_cast<double>(m - 2) / sxx);
  }
  return fit;
}

double ks_against(std::vector<double> sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  return ks_distance(sample, cdf);
}

double chi_squared_cdf(int dim, double x) {
  if (x <= 0.0) return 0.0;
  return regularized_gamma_p(0.5 * dim, 0.5 * x);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

// ---------------------------------------------------------------------------
// Replication machinery.

namespace {

struct RepOutcome {
  Vec theta_tilde;
  Vec theta_hat;
  Vec centering;
  Vec xi;  // sqrt(n) L^T (theta_hat - centering)
  double u_centering = 0.0;
  double u_true = 0.0;
  double diameter = 0.0;
  long projections = 0;
  bool covered_centering = false;
  bool covered_true = false;
  std::vector<double> mse_at;       // |theta_tilde - theta*|^2 at checkpoints
  std::vector<double> diameter_at;  // region diameter at checkpoints
  AsymptoticDiagnostics diag;       // filled when diagnostics requested
};

RepOutcome run_replication(const GaussianAR1Model& model, const EstimatorConfig& ecfg,
                           const Vec& theta_star, long n, double alpha, std::uint64_t seed,
                           std::span<const long> checkpoints, bool diagnostics) {
  Rng rng(seed);
  EstimatorState state = init_estimator(model, ecfg);
  Vec psi_star_sum = Vec::zeros(model.dim());

  double z = model.sample_stationary_initial(theta_star, rng);
  observe(state, model, ecfg, z);
  std::size_t next_cp = 0;
  RepOutcome out;
  for (long i = 1; i <= n; ++i) {
    const double z_prev = z;
    z = model.sample_transition(theta_star, z_prev, rng);
    refined_step(state, model, ecfg, z);
    if (diagnostics) psi_star_sum += model.score_and_hessian(theta_star, z_prev, z).psi;
    if (next_cp < checkpoints.size() && i == checkpoints[next_cp]) {
      const Vec delta = state.theta_tilde - theta_star;
      out.mse_at.push_back(delta.dot(delta));
      out.diameter_at.push_back(region_diameter(build_region(state, model, alpha)));
      ++next_cp;
    }
  }

  out.theta_tilde = state.theta_tilde;
  out.theta_hat = state.theta_hat;
  out.centering = centering_oracle(state, model, theta_star);
  out.u_centering = u_statistic(state, model, out.centering);
  out.u_true = u_statistic(state, model, theta_star);
  out.projections = state.projections;

  const ConfidenceRegion region = build_region(state, model, alpha);
  out.diameter = region_diameter(region);
  out.covered_centering = region_contains(region, model, out.centering);
  out.covered_true = region_contains(region, model, theta_star);

  const Mat l = cholesky(model.fisher_information(state.theta_tilde));
  const Vec diff = state.theta_hat - out.centering;
  const double root_n = std::sqrt(static_cast<double>(n));
  out.xi = Vec(model.dim());
  for (int i = 0; i < model.dim(); ++i) {
    double s = 0.0;
    for (int j = i; j < model.dim(); ++j) s += l(j, i) * diff[j];
    out.xi[i] = root_n * s;
  }

  if (diagnostics)
    out.diag = linearization_diagnostics(state, model, theta_star, psi_star_sum);
  return out;
}

std::vector<RepOutcome> run_replications(const ExperimentConfig& cfg,
                                         std::span<const long> checkpoints) {
  const GaussianAR1Model model = make_model(cfg);
  const EstimatorConfig ecfg = make_estimator_config(cfg, model);
  const Vec theta_star = theta_star_of(cfg);
  std::vector<RepOutcome> outcomes(static_cast<std::size_t>(cfg.reps));
  parallel_for(cfg.reps, [&](int rep) {
    outcomes[static_cast<std::size_t>(rep)] =
        run_replication(model, ecfg, theta_star, cfg.n, cfg.alpha,
                        replication_seed(cfg.seed, static_cast<std::uint64_t>(rep)), checkpoints,
                        cfg.diagnostics);
  });
  return outcomes;
}

double median_of(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t m = xs.size();
  return m % 2 == 1 ? xs[m / 2] : 0.5 * (xs[m / 2 - 1] + xs[m / 2]);
}

json proportion_with_stderr(int hits, int total) {
  const double p = static_cast<double>(hits) / total;
  return json{{"estimate", p}, {"stderr", std::sqrt(p * (1.0 - p) / total)}};
}

// Null scale of the KS statistic for m samples (Kolmogorov asymptotics).
json ks_entry(double d, int m) {
  return json{{"distance", d},
              {"null_mean", 0.8687 / std::sqrt(static_cast<double>(m))},
              {"null_stderr", 0.2603 / std::sqrt(static_cast<double>(m))}};
}

json diagnostics_summary(const std::vector<RepOutcome>& outcomes, long n) {
  std::vector<double> delta, resid, root_n_resid, drift;
  for (const auto& o : outcomes) {
    delta.push_back(o.diag.delta_norm);
    resid.push_back(o.diag.linearization_residual);
    root_n_resid.push_back(std::sqrt(static_cast<double>(n)) * o.diag.linearization_residual);
    drift.push_back(o.diag.hessian_avg_drift);
  }
  return json{{"median_delta_norm", median_of(delta)},
              {"median_linearization_residual", median_of(resid)},
              {"median_root_n_residual", median_of(root_n_resid)},
              {"median_hessian_avg_drift", median_of(drift)}};
}

std::vector<long> log_checkpoints(long lo, long hi, int per_decade) {
  std::vector<long> cps;
  const double step = 1.0 / per_decade;
  for (double e = std::log10(static_cast<double>(lo));; e += step) {
    const long v = std::lround(std::pow(10.0, e));
    if (v > hi) break;
    if (cps.empty() || v > cps.back()) cps.push_back(v);
  }
  if (cps.empty() || cps.back() != hi) cps.push_back(hi);
  return cps;
}

}  // namespace

json coverage_report(const ExperimentConfig& cfg) {
  if (cfg.reps < 50) throw InvalidConfig("coverage needs reps >= 50");
  const GaussianAR1Model model = make_model(cfg);
  const EstimatorConfig ecfg = make_estimator_config(cfg, model);
  const auto outcomes = run_replications(cfg, {});

  int hit_centering = 0, hit_true = 0;
  std::vector<double> u_values, diameters, projections;
  for (const auto& o : outcomes) {
    hit_centering += o.covered_centering ? 1 : 0;
    hit_true += o.covered_true ? 1 : 0;
    u_values.push_back(o.u_centering);
    diameters.push_back(o.diameter);
    projections.push_back(static_cast<double>(o.projections));
  }
  const int d = model.dim();
  const double ks_u = ks_against(u_values, [d](double x) { return chi_squared_cdf(d, x); });

  json report{{"schema_version", 1},
              {"command", "coverage"},
              {"config", config_echo(cfg, model, ecfg)},
              {"coverage_centering", proportion_with_stderr(hit_centering, cfg.reps)},
              {"coverage_true", proportion_with_stderr(hit_true, cfg.reps)},
              {"ks_u_centering", ks_entry(ks_u, cfg.reps)},
              {"median_diameter", median_of(diameters)},
              {"median_projections", median_of(projections)}};
  if (cfg.diagnostics) report["diagnostics"] = diagnostics_summary(outcomes, cfg.n);
  return report;
}

json rate_report(const ExperimentConfig& cfg) {
  if (cfg.reps < 50) throw InvalidConfig("rate needs reps >= 50");
  if (cfg.n < 10000) throw InvalidConfig("rate needs n >= 10000");
  const GaussianAR1Model model = make_model(cfg);
  const EstimatorConfig ecfg = make_estimator_config(cfg, model);
  const auto checkpoints = log_checkpoints(1000, cfg.n, 3);
  const auto outcomes = run_replications(cfg, checkpoints);

  json rows = json::array();
  std::vector<double> log_n, log_mse;
  std::vector<double> diam_log_median;
  for (std::size_t k = 0; k < checkpoints.size(); ++k) {
    double mse = 0.0;
    std::vector<double> diams;
    for (const auto& o : outcomes) {
      mse += o.mse_at[k];
      diams.push_back(o.diameter_at[k]);
    }
    mse /= cfg.reps;
    const double med_diam = median_of(diams);
    rows.push_back({{"n", checkpoints[k]}, {"mean_mse", mse}, {"median_diameter", med_diam}});
    log_n.push_back(std::log(static_cast<double>(checkpoints[k])));
    log_mse.push_back(std::log(mse));
    diam_log_median.push_back(std::log(med_diam));
  }
  const LineFit mse_fit = fit_line(log_n, log_mse);
  const LineFit diam_fit = fit_line(log_n, diam_log_median);

  json report{{"schema_version", 1},
              {"command", "rate"},
              {"config", config_echo(cfg, model, ecfg)},
              {"checkpoints", rows},
              {"mse_loglog_slope",
               {{"estimate", mse_fit.slope},
                {"stderr", mse_fit.slope_stderr},
                {"band", {mse_fit.slope - 2 * mse_fit.slope_stderr,
                          mse_fit.slope + 2 * mse_fit.slope_stderr}}}},
              {"diameter_loglog_slope",
               {{"estimate", diam_fit.slope}, {"stderr", diam_fit.slope_stderr}}},
              {"beta_bound_violated", !ecfg.beta_honors_bound}};
  return report;
}

json normality_report(const ExperimentConfig& cfg) {
  if (cfg.reps < 200) throw InvalidConfig("normality needs reps >= 200");
  const GaussianAR1Model model = make_model(cfg);
  const EstimatorConfig ecfg = make_estimator_config(cfg, model);
  const auto outcomes = run_replications(cfg, {});
  const int d = model.dim();

  // Re-standardize against each replication's own scale matrix but a
  // shuffled centering: destroys the coupling, so the distances blow up.
  std::vector<int> perm(outcomes.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  Rng shuffle_rng(cfg.seed ^ 0xabcdef1234567890ULL);
  for (std::size_t i = perm.size(); i > 1; --i)
    std::swap(perm[i - 1], perm[static_cast<std::size_t>(shuffle_rng.uniform() * i) % i]);

  json components = json::array();
  json control = json::array();
  std::vector<double> u_values;
  for (const auto& o : outcomes) u_values.push_back(o.u_centering);
  for (int c = 0; c < d; ++c) {
    std::vector<double> xs, shuffled;
    for (const auto& o : outcomes) xs.push_back(o.xi[c]);
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      const auto& o = outcomes[i];
      const auto& other = outcomes[static_cast<std::size_t>(perm[i])];
      const Mat l = cholesky(model.fisher_information(o.theta_tilde));
      const Vec diff = o.theta_hat - other.centering;
      double s = 0.0;
      for (int j = c; j < d; ++j) s += l(j, c) * diff[j];
      shuffled.push_back(std::sqrt(static_cast<double>(cfg.n)) * s);
    }
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= xs.size();
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= (xs.size() - 1);
    components.push_back(
        {{"index", c},
         {"ks", ks_entry(ks_against(xs, standard_normal_cdf), cfg.reps)},
         {"mean", mean},
         {"stddev", std::sqrt(var)},
         {"stderr_mean", std::sqrt(var / xs.size())}});
    control.push_back(
        {{"index", c}, {"ks", ks_entry(ks_against(shuffled, standard_normal_cdf), cfg.reps)}});
  }
  const double ks_u = ks_against(u_values, [d](double x) { return chi_squared_cdf(d, x); });

  json report{{"schema_version", 1},
              {"command", "normality"},
              {"config", config_echo(cfg, model, ecfg)},
              {"components", components},
              {"ks_u_centering", ks_entry(ks_u, cfg.reps)},
              {"negative_control", control}};
  if (cfg.diagnostics) report["diagnostics"] = diagnostics_summary(outcomes, cfg.n);
  return report;
}

json clt_report(const ExperimentConfig& cfg) {
  if (cfg.reps < 200) throw InvalidConfig("clt needs reps >= 200");
  const GaussianAR1Model model = make_model(cfg);
  const EstimatorConfig ecfg = make_estimator_config(cfg, model);
  const Vec theta_star = theta_star_of(cfg);
  const Mat l_star = cholesky(model.fisher_information(theta_star));
  const int d = model.dim();

  std::vector<Vec> standardized(static_cast<std::size_t>(cfg.reps));
  parallel_for(cfg.reps, [&](int rep) {
    Rng rng(replication_seed(cfg.seed, static_cast<std::uint64_t>(rep)));
    double z = model.sample_stationary_initial(theta_star, rng);
    Vec sum = Vec::zeros(d);
    for (long i = 0; i < cfg.n; ++i) {
      const double z_next = model.sample_transition(theta_star, z, rng);
      sum += model.score_and_hessian(theta_star, z, z_next).psi;
      z = z_next;
    }
    standardized[static_cast<std::size_t>(rep)] =
        solve_lower(l_star, (1.0 / std::sqrt(static_cast<double>(cfg.n))) * sum);
  });

  json components = json::array();
  for (int c = 0; c < d; ++c) {
    std::vector<double> xs;
    for (const auto& v : standardized) xs.push_back(v[c]);
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= xs.size();
    components.push_back({{"index", c},
                          {"ks", ks_entry(ks_against(xs, standard_normal_cdf), cfg.reps)},
                          {"mean", mean},
                          {"stderr_mean", 1.0 / std::sqrt(static_cast<double>(cfg.reps))}});
  }
  return json{{"schema_version", 1},
              {"command", "clt"},
              {"config", config_echo(cfg, model, ecfg)},
              {"components", components}};
}

json ergodic_report(const ExperimentConfig& cfg) {
  if (cfg.n < 100) throw InvalidConfig("ergodic needs n >= 100");
  const GaussianAR1Model model = make_model(cfg);
  const EstimatorConfig ecfg = make_estimator_config(cfg, model);
  const Vec theta_star = theta_star_of(cfg);
  std::vector<Vec> grid = ergodic_grid(cfg);
  // theta* is always evaluated; make sure it heads the list exactly once.
  std::erase_if(grid, [&](const Vec& g) { return (g - theta_star).max_abs() == 0.0; });
  grid.insert(grid.begin(), theta_star);
  const std::size_t g = grid.size();

  // One pass over a single chain, accumulating running averages of the
  // log-density at every grid point plus batch sums of the differences
  // pi_i(theta*) - pi_i(theta) for batch-means standard errors.
  const long batch = std::max<long>(1, static_cast<long>(std::sqrt(static_cast<double>(cfg.n))));
  const long n_batches = cfg.n / batch;
  std::vector<double> averages(g, 0.0);
  std::vector<std::vector<double>> batch_means(g, std::vector<double>());
  std::vector<double> batch_acc(g, 0.0);

  Rng rng(cfg.seed);
  double z = model.sample_stationary_initial(theta_star, rng);
  const GaussHermite gh = gauss_hermite(64);
  long in_batch = 0;
  for (long i = 1; i <= cfg.n; ++i) {
    const double z_next = model.sample_transition(theta_star, z, rng);
    const double pi_star = model.log_transition_density(theta_star, z, z_next);
    for (std::size_t k = 0; k < g; ++k) {
      const double pi_k = k == 0 ? pi_star : model.log_transition_density(grid[k], z, z_next);
      averages[k] += (pi_k - averages[k]) / static_cast<double>(i);
      batch_acc[k] += pi_star - pi_k;
    }
    z = z_next;
    if (++in_batch == batch) {
      for (std::size_t k = 0; k < g; ++k) {
        if (static_cast<long>(batch_means[k].size()) < n_batches)
          batch_means[k].push_back(batch_acc[k] / batch);
        batch_acc[k] = 0.0;
      }
      in_batch = 0;
    }
  }

  // Quadrature value of E[pi_1(theta)] under the stationary chain law:
  // z0 ~ N(mu*, sigma*^2), z1 | z0 from the kernel.
  const double root2 = std::sqrt(2.0);
  const double innov_sd = cfg.sigma_star * std::sqrt(1.0 - cfg.rho * cfg.rho);
  auto quadrature_mean_logdensity = [&](const Vec& theta) {
    double total = 0.0;
    for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
      const double z0 = cfg.mu_star + root2 * cfg.sigma_star * gh.nodes[i];
      const double mean1 = cfg.rho * z0 + (1.0 - cfg.rho) * cfg.mu_star;
      double inner = 0.0;
      for (std::size_t j = 0; j < gh.nodes.size(); ++j) {
        const double z1 = mean1 + root2 * innov_sd * gh.nodes[j];
        inner += gh.weights[j] * model.log_transition_density(theta, z0, z1);
      }
      total += gh.weights[i] * inner;
    }
    return total / M_PI;
  };

  json points = json::array();
  bool maximizer_ok = true;
  for (std::size_t k = 0; k < g; ++k) {
    const double quad = quadrature_mean_logdensity(grid[k]);
    double margin = 0.0, se = 0.0;
    if (k > 0) {
      double m = 0.0;
      for (double b : batch_means[k]) m += b;
      m /= batch_means[k].size();
      double v = 0.0;
      for (double b : batch_means[k]) v += (b - m) * (b - m);
      v /= (batch_means[k].size() - 1);
      margin = m;
      se = std::sqrt(v / batch_means[k].size());
      if (margin <= 0.0) maximizer_ok = false;
    }
    points.push_back({{"theta", vec_to_json(grid[k])},
                      {"is_true_parameter", k == 0},
                      {"chain_average", averages[k]},
                      {"quadrature", quad},
                      {"gap", std::abs(averages[k] - quad)},
                      {"dominance_margin", margin},
                      {"dominance_stderr", se},
                      {"dominance_sigmas", se > 0.0 ? margin / se : 0.0}});
  }

  return json{{"schema_version", 1},
              {"command", "ergodic"},
              {"config", config_echo(cfg, model, ecfg)},
              {"quadrature_nodes", 64},
              {"batch_size", batch},
              {"points", points},
              {"maximizer_ok", maximizer_ok}};
}

}  // namespace rcr
