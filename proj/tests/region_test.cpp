#include <doctest.h>

#include <cmath>

#include "rcr/errors.hpp"
#include "rcr/region.hpp"

using namespace rcr;

namespace {

// Model wrapper with a settable Fisher matrix, for exercising non-diagonal
// shape matrices that the AR(1) family cannot produce.
class ShapedModel final : public MarkovModel {
 public:
  ShapedModel(Mat fisher, ParameterBox box) : fisher_(fisher), box_(std::move(box)) {}

  int dim() const override { return fisher_.dim(); }
  const ParameterBox& box() const override { return box_; }
  double log_transition_density(const Vec&, double, double) const override { return 0.0; }
  ScoreEval score_and_hessian(const Vec&, double, double) const override {
    return {Vec(dim()), Mat(dim())};
  }
  Mat fisher_information(const Vec&) const override { return fisher_; }
  double sample_transition(const Vec&, double, Rng&) const override { return 0.0; }
  double sample_stationary_initial(const Vec&, Rng&) const override { return 0.0; }
  double beta_lower_bound() const override { return 0.0; }

 private:
  Mat fisher_;
  ParameterBox box_;
};

ParameterBox big_box() { return ParameterBox(Vec{-100.0, -100.0}, Vec{100.0, 100.0}); }

EstimatorState state_with(long n, Vec center) {
  EstimatorState st;
  st.n = n;
  st.theta_tilde = center;
  st.theta_hat = center;
  st.theta_hat_valid = true;
  return st;
}

// Jacobi eigenvalue sweep, as an independent spectral oracle.
double jacobi_lambda_max(Mat a) {
  const int d = a.dim();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < d; ++p)
      for (int q = p + 1; q < d; ++q) off = std::max(off, std::abs(a(p, q)));
    if (off < 1e-14) break;
    for (int p = 0; p < d; ++p)
      for (int q = p + 1; q < d; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double phi = 0.5 * std::atan2(2.0 * a(p, q), a(q, q) - a(p, p));
        const double c = std::cos(phi), s = std::sin(phi);
        for (int k = 0; k < d; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < d; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
  }
  double lmax = a(0, 0);
  for (int i = 1; i < d; ++i) lmax = std::max(lmax, a(i, i));
  return lmax;
}

}  // namespace

TEST_CASE("unit-shape region has axis-aligned unit extreme points") {
  // kappa = 1 corresponds to alpha = exp(-1/2) in two dimensions.
  const ShapedModel model(Mat::identity(2), big_box());
  const ConfidenceRegion region =
      build_region(state_with(1, Vec{0.0, 0.0}), model, std::exp(-0.5));
  CHECK(region.kappa == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(region.extreme_points.size() == 4);
  CHECK(region.extreme_points[0][0] == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(region.extreme_points[1][0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(region.extreme_points[2][1] == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(region.extreme_points[3][1] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("extreme points from a non-diagonal shape") {
  // L = [[2,0],[1,2]] so the shape matrix is [[4,2],[2,5]]; back
  // substitution gives (L^T)^{-1} e_1 = (0.5, 0), e_2 -> (-0.25, 0.5).
  const ShapedModel model(Mat::symmetric({{4.0, 2.0}, {2.0, 5.0}}), big_box());
  const ConfidenceRegion region =
      build_region(state_with(1, Vec{0.0, 0.0}), model, std::exp(-0.5));
  CHECK(region.extreme_points[1][0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(region.extreme_points[1][1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(region.extreme_points[3][0] == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(region.extreme_points[3][1] == doctest::Approx(0.5).epsilon(1e-12));

  // Same shape at n = 4: every displacement halves.
  const ConfidenceRegion quarter =
      build_region(state_with(4, Vec{0.0, 0.0}), model, std::exp(-0.5));
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 2; ++i)
      CHECK(quarter.extreme_points[k][i] ==
            doctest::Approx(0.5 * region.extreme_points[k][i]).epsilon(1e-12));
}

TEST_CASE("every extreme point sits on the boundary and pairs are antipodal") {
  Rng rng(404);
  for (int trial = 0; trial < 1000; ++trial) {
    Mat m(2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m(i, j) = rng.normal();
    Mat shape(2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        shape(i, j) = m(0, i) * m(0, j) + m(1, i) * m(1, j) + (i == j ? 1e-3 : 0.0);
    const ShapedModel model(shape, big_box());
    const Vec center{4.0 * rng.normal(), 4.0 * rng.normal()};
    const long n = 1 + static_cast<long>(rng.uniform() * 1000);
    const double alpha = 0.01 + 0.98 * rng.uniform();

    EstimatorState st = state_with(n, center);
    const ConfidenceRegion region = build_region(st, model, alpha);
    for (const Vec& p : region.extreme_points)
      CHECK(std::abs(u_statistic(st, model, p) - region.kappa) <= 1e-8 * region.kappa);
    for (int j = 0; j < 2; ++j) {
      const Vec sum = region.extreme_points[2 * j] + region.extreme_points[2 * j + 1];
      CHECK(std::abs(sum[0] - 2.0 * center[0]) <= 1e-10);
      CHECK(std::abs(sum[1] - 2.0 * center[1]) <= 1e-10);
    }
  }
}

TEST_CASE("membership is strict and box-aware") {
  const ShapedModel model(Mat::identity(2), big_box());
  EstimatorState st = state_with(100, Vec{0.0, 0.0});
  const ConfidenceRegion region = build_region(st, model, 0.05);

  CHECK(region_contains(region, model, region.center));
  for (const Vec& p : region.extreme_points) CHECK_FALSE(region_contains(region, model, p));

  // U = 100 * 0.04 = 4 < 5.991.
  CHECK(region_contains(region, model, Vec{0.2, 0.0}));
  CHECK(u_statistic(st, model, Vec{0.2, 0.0}) == doctest::Approx(4.0).epsilon(1e-12));

  // Inside the ellipsoid but outside the box: excluded by definition.
  const ShapedModel tiny(Mat::identity(2), ParameterBox(Vec{-0.1, -0.1}, Vec{0.1, 0.1}));
  const ConfidenceRegion clipped = build_region(state_with(100, Vec{0.0, 0.0}), tiny, 0.05);
  CHECK_FALSE(region_contains(clipped, tiny, Vec{0.2, 0.0}));
  CHECK(clipped.extreme_point_outside_box);
}

TEST_CASE("membership agrees with the expanded double-sum form on a grid") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    Mat m(2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m(i, j) = rng.normal();
    Mat shape(2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        shape(i, j) = m(0, i) * m(0, j) + m(1, i) * m(1, j) + (i == j ? 0.05 : 0.0);
    const ShapedModel model(shape, big_box());
    const Vec center{rng.normal(), rng.normal()};
    const long n = 5 + static_cast<long>(rng.uniform() * 50);
    const ConfidenceRegion region = build_region(state_with(n, center), model, 0.1);

    for (int gi = 0; gi < 50; ++gi)
      for (int gj = 0; gj < 50; ++gj) {
        const Vec theta{center[0] - 2.0 + 4.0 * gi / 49.0, center[1] - 2.0 + 4.0 * gj / 49.0};
        double quad = 0.0;
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            quad += shape(a, b) * (center[a] - theta[a]) * (center[b] - theta[b]);
        const bool direct = static_cast<double>(n) * quad < region.kappa;
        CHECK(region_contains(region, model, theta) == direct);
      }
  }
}

TEST_CASE("region stream equals batch rebuild and is order sensitive") {
  const GaussianAR1Model model(0.0, ParameterBox(Vec{-5.0, 0.1}, Vec{5.0, 4.0}));
  const EstimatorConfig cfg = make_estimator_config(model, 0.5, Vec{0.0, 1.0});

  Rng rng(9);
  std::vector<double> zs;
  for (int i = 0; i < 301; ++i) zs.push_back(rng.normal());

  RegionStreamState stream = make_region_stream(model, cfg, 0.05);
  for (double z : zs) region_step(stream, model, cfg, z);

  EstimatorState batch = init_estimator(model, cfg);
  for (double z : zs) observe(batch, model, cfg, z);
  const ConfidenceRegion direct = build_region(batch, model, 0.05);

  REQUIRE(stream.region.has_value());
  CHECK(stream.region->kappa == direct.kappa);
  for (int i = 0; i < 2; ++i) {
    CHECK(stream.region->center[i] == doctest::Approx(direct.center[i]).epsilon(1e-12));
    for (int k = 0; k < 4; ++k)
      CHECK(stream.region->extreme_points[k][i] ==
            doctest::Approx(direct.extreme_points[k][i]).epsilon(1e-12));
  }

  // Swapping two observations changes the region: no exchangeability.
  std::vector<double> swapped{0.3, 1.2, -0.4};
  std::vector<double> original{1.2, 0.3, -0.4};
  RegionStreamState s1 = make_region_stream(model, cfg, 0.05);
  RegionStreamState s2 = make_region_stream(model, cfg, 0.05);
  for (double z : original) region_step(s1, model, cfg, z);
  for (double z : swapped) region_step(s2, model, cfg, z);
  CHECK(s1.region->center[0] != s2.region->center[0]);
}

TEST_CASE("worked one-step region") {
  const GaussianAR1Model model(0.0, ParameterBox(Vec{-5.0, 0.1}, Vec{5.0, 4.0}));
  const EstimatorConfig cfg = make_estimator_config(model, 0.5, Vec{0.0, 1.0});
  EstimatorState st = init_estimator(model, cfg);
  observe(st, model, cfg, 0.0);
  observe(st, model, cfg, 1.0);
  const ConfidenceRegion region = build_region(st, model, 0.05);

  const double kappa = -2.0 * std::log(0.05);
  CHECK(region.kappa == doctest::Approx(kappa).epsilon(1e-10));
  CHECK(region.center[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(region.center[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(region.chol_lower(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(region.chol_lower(1, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  // Displacements sqrt(kappa) (1, 0) and sqrt(kappa) (0, 1/sqrt(2)).
  CHECK(region.extreme_points[1][0] == doctest::Approx(3.0 + std::sqrt(kappa)).epsilon(1e-12));
  CHECK(region.extreme_points[3][1] ==
        doctest::Approx(1.0 + std::sqrt(kappa / 2.0)).epsilon(1e-12));
}

TEST_CASE("diameter closed forms and scaling") {
  const double aexp = std::exp(-0.5);  // kappa = 1
  {
    const ShapedModel model(Mat::identity(2), big_box());
    const ConfidenceRegion r = build_region(state_with(1, Vec{0.0, 0.0}), model, aexp);
    CHECK(region_diameter(r) == doctest::Approx(2.0).epsilon(1e-12));
  }
  {
    // Shape diag(4, 1): axis lengths 2 sqrt(kappa)/l_ii = 1 and 2.
    const ShapedModel model(Mat::diag({4.0, 1.0}), big_box());
    const ConfidenceRegion r = build_region(state_with(1, Vec{0.0, 0.0}), model, aexp);
    CHECK(region_diameter(r) == doctest::Approx(2.0).epsilon(1e-12));
    const ConfidenceRegion r4 = build_region(state_with(4, Vec{0.0, 0.0}), model, aexp);
    CHECK(region_diameter(r4) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("diameter power iteration matches a Jacobi oracle in 3d") {
  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    Mat m(3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = rng.normal();
    Mat shape(3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = i == j ? 0.05 : 0.0;
        for (int k = 0; k < 3; ++k) s += m(k, i) * m(k, j);
        shape(i, j) = s;
      }
    ConfidenceRegion region;
    region.n = 7;
    region.kappa = 3.1;
    region.chol_lower = cholesky(shape);
    const double expected =
        2.0 * std::sqrt(region.kappa / 7.0) * std::sqrt(jacobi_lambda_max(spd_inverse(shape)));
    CHECK(region_diameter(region) == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("build_region preconditions") {
  const ShapedModel model(Mat::identity(2), big_box());
  EstimatorState st;  // n = 0
  CHECK_THROWS_AS(build_region(st, model, 0.05), InvalidConfig);
}
