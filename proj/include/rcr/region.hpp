#pragma once

#include <optional>
#include <vector>

#include "rcr/estimator.hpp"

namespace rcr {

/// Snapshot of the confidence ellipsoid
///   { theta : n |L^T (center - theta)|^2 < kappa }
/// where L L^T = I(theta_tilde_n). The boundary is uniquely determined by
/// the 2d axis extreme points center +- sqrt(kappa/n) (L^T)^{-1} e_j.
struct ConfidenceRegion {
  long n = 0;
  double alpha = 0.0;
  double kappa = 0.0;
  Vec center;           // theta_hat_n
  Mat chol_lower;       // L
  /// Ordered (-e1, +e1, -e2, +e2, ...): points 2j-1 and 2j are the
  /// antipodal pair along axis j (1-based pairing).
  std::vector<Vec> extreme_points;
  /// The ellipsoid parameterization ignores the box; this flags snapshots
  /// where some extreme point left it.
  bool extreme_point_outside_box = false;
};

/// Region at the current estimator state. Requires n >= 1.
ConfidenceRegion build_region(const EstimatorState& state, const MarkovModel& model,
                              double alpha);

/// Strict membership: U_n(theta) < kappa AND theta inside the parameter box
/// (the region is defined as a subset of the box; boundary excluded).
bool region_contains(const ConfidenceRegion& region, const MarkovModel& model, const Vec& theta);

/// Largest distance between two points of the ellipsoid:
/// 2 sqrt(kappa/n) sigma_max((L^T)^{-1}). Closed form for d <= 2, power
/// iteration (tolerance 1e-10) above.
double region_diameter(const ConfidenceRegion& region);

/// One-observation region update: the estimator advances by refined_step and
/// the region is rebuilt. Depends only on (previous state, z_new).
struct RegionStreamState {
  EstimatorState estimator;
  double alpha = 0.0;
  std::optional<ConfidenceRegion> region;  // set once estimator.n >= 1
};

RegionStreamState make_region_stream(const MarkovModel& model, const EstimatorConfig& config,
                                     double alpha);

/// Feed one observation; first call seeds, later calls advance and rebuild.
void region_step(RegionStreamState& stream, const MarkovModel& model,
                 const EstimatorConfig& config, double z_new);

}  // namespace rcr
