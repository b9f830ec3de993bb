#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rcr/config.hpp"
#include "rcr/region.hpp"

namespace rcr {

// ---------------------------------------------------------------------------
// Chain simulation and the chain CSV format (header "step,z"; z written as
// the shortest decimal that round-trips the 64-bit float).

/// Z_0 from the stationary law, then n transitions: n + 1 values total.
std::vector<double> simulate_chain(const GaussianAR1Model& model, const Vec& theta_star,
                                   long n, std::uint64_t seed);

std::string chain_to_csv(std::span<const double> chain);
std::vector<double> parse_chain_csv(std::istream& in);  // ParseError with line numbers

// ---------------------------------------------------------------------------
// Streaming runs over a recorded chain.

/// Estimates CSV: header "n,mu_tilde,sigma_tilde,mu_hat,sigma_hat,projected",
/// one row per transition, then a "#" summary footer with totals.
std::string run_estimates_csv(const ExperimentConfig& config, std::span<const double> chain);

/// Regions JSONL: one JSON object per emitted step (every config.stride
/// transitions), full-precision numbers.
std::string run_regions_jsonl(const ExperimentConfig& config, std::span<const double> chain);

// ---------------------------------------------------------------------------
// Monte Carlo reports. Each returns a single JSON document with a
// schema_version field, the resolved config, and standard errors for every
// Monte Carlo figure. Replications are independent jobs seeded
// seed ^ rep_index and merged in rep order, so thread count cannot change
// any result.

nlohmann::json coverage_report(const ExperimentConfig& config);   // reps >= 50
nlohmann::json rate_report(const ExperimentConfig& config);       // reps >= 50, n >= 1e4
nlohmann::json normality_report(const ExperimentConfig& config);  // reps >= 200
nlohmann::json clt_report(const ExperimentConfig& config);        // reps >= 200
nlohmann::json ergodic_report(const ExperimentConfig& config);    // single chain

// ---------------------------------------------------------------------------
// Small shared helpers (also used by the acceptance suite).

/// Least-squares fit y = a + b x; returns {slope, intercept, slope_stderr}.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// KS distance of a sample (copied and sorted here) against a CDF.
double ks_against(std::vector<double> sample, const std::function<double(double)>& cdf);

/// chi^2_d CDF, for KS checks of the ellipsoid statistic.
double chi_squared_cdf(int dim, double x);

void write_text_file(const std::string& path, const std::string& content);  // IoError

/// Runs fn(0..count-1) on a small thread pool; results must be written to
/// per-index slots by the caller. max_workers = 0 uses the hardware count;
/// any worker count yields identical results by construction.
void parallel_for(int count, const std::function<void(int)>& fn, int max_workers = 0);

}  // namespace rcr
