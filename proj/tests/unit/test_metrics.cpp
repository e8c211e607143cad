#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "rankone/metrics.hpp"
#include "rankone/transforms.hpp"

using namespace rankone;

namespace {

// Half the unit sphere S^{md-1} times the Beta integral of the radial density.
double volume_oracle(int d, int n) {
  const double m = n + 1, k = m * d;
  const double sphere = 2.0 * std::pow(M_PI, k / 2) / std::tgamma(k / 2);
  return 0.5 * sphere * std::beta(k / 2, d / 2.0);
}

WVec scalar_multiple(const ModuleSpec& spec, const WVec& x, Rng& rng) {
  return cline_through(spec, x).frame().transpose() * rng.gaussian(spec.d);
}

}  // namespace

TEST(Metrics, VolumeMatchesBetaIntegral) {
  for (auto [d, n] : fixture::all()) {
    const ModuleSpec spec = make_module(d, n);
    EXPECT_NEAR(volume(spec), volume_oracle(d, n), 1e-12 * volume_oracle(d, n)) << d << "," << n;
    EXPECT_NEAR(volume_quadrature(spec), volume(spec), 1e-12 * volume(spec)) << d << "," << n;
  }
}

TEST(Metrics, VolumeSpotValues) {
  EXPECT_NEAR(volume(make_module(1, 0)), M_PI, 1e-14);
  EXPECT_NEAR(volume(make_module(1, 1)), 2 * M_PI, 1e-14);
  EXPECT_NEAR(volume(make_module(1, 2)), M_PI * M_PI, 1e-14);
  EXPECT_NEAR(volume(make_module(2, 0)), M_PI, 1e-14);
  EXPECT_NEAR(volume(make_module(2, 1)), M_PI * M_PI / 2, 1e-14);
  EXPECT_NEAR(volume(make_module(4, 0)), M_PI * M_PI / 6, 1e-14);
}

TEST(Metrics, VolumeDensityIsRootDeterminant) {
  Rng rng(157);
  for (auto [d, n] : {std::pair{1, 2}, {2, 1}, {4, 1}, {8, 1}}) {
    const ModuleSpec spec = make_module(d, n);
    const WVec w = 0.8 * rng.gaussian(spec.dim_w());
    const double det = metric_tensor(spec, Model::compact, w).determinant();
    EXPECT_NEAR(volume_density(spec, w), std::sqrt(det), 1e-12) << d << "," << n;
    const double expected = std::pow(1.0 + w.squaredNorm(), -(n + 2) * d / 2.0);
    EXPECT_NEAR(volume_density(spec, w), expected, 1e-12);
  }
}

TEST(Metrics, MetricScaleMatchesTensor) {
  Rng rng(163);
  for (auto model : {Model::compact, Model::ball}) {
    const ModuleSpec spec = make_module(4, 1);
    for (int s = 0; s < 10; ++s) {
      const WVec w = 0.5 * rng.unit(8);
      const Vec x = rng.gaussian(8);
      const double angle = cline_angle(spec, w, x);
      EXPECT_NEAR(metric_norm(spec, model, w, x), x.norm() * metric_scale(model, w.norm(), angle), 1e-12);
    }
  }
  const ModuleSpec spec = make_module(2, 1);
  EXPECT_LT((metric_tensor(spec, Model::compact, WVec::Zero(4)) - Mat::Identity(4, 4)).norm(), 1e-15);
  EXPECT_NEAR(metric_scale(Model::compact, 1.0, 0.0), 0.5, 1e-15);
  EXPECT_NEAR(metric_scale(Model::compact, 1.0, M_PI / 2), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(metric_scale(Model::ball, 0.5, 0.0), 1.0 / 0.75, 1e-15);
}

TEST(Metrics, GeodesicsFromOrigin) {
  const ModuleSpec spec = make_module(2, 1);
  const WVec x = standard_w(spec, 0);
  const CPWPoint origin = CPWPoint::finite(WVec::Zero(4));
  EXPECT_NEAR(distance(spec, Model::compact, origin, CPWPoint::finite(x)), M_PI / 4, 1e-14);
  EXPECT_NEAR(distance(spec, Model::compact, origin, exp0(spec, Model::compact, x, 1.1)), 1.1, 1e-12);
  EXPECT_NEAR(distance(spec, Model::ball, origin, exp0(spec, Model::ball, x, 1.1)), 1.1, 1e-12);
  const CPWPoint far = exp0(spec, Model::compact, x, M_PI / 2);
  ASSERT_FALSE(far.is_finite());
  EXPECT_NEAR(distance(spec, Model::compact, origin, far), M_PI / 2, 1e-14);
  EXPECT_RANKONE_ERROR(exp0(spec, Model::compact, 2.0 * x, 1.0), ErrorCode::non_unit);
  EXPECT_RANKONE_ERROR(distance(spec, Model::ball, origin, CPWPoint::finite(x)), ErrorCode::ball_boundary);
}

TEST(Metrics, DistanceIsAMetric) {
  Rng rng(167);
  for (auto [d, n] : fixture::all()) {
    const ModuleSpec spec = make_module(d, n);
    for (int s = 0; s < 8; ++s) {
      const CPWPoint p = random_point(spec, rng), q = random_point(spec, rng), r = random_point(spec, rng);
      const double pq = distance(spec, Model::compact, p, q);
      EXPECT_NEAR(pq, distance(spec, Model::compact, q, p), 1e-10) << d << "," << n;
      EXPECT_LE(pq, M_PI / 2 + 1e-12);
      EXPECT_LE(pq, distance(spec, Model::compact, p, r) + distance(spec, Model::compact, r, q) + 1e-10);
      EXPECT_NEAR(distance(spec, Model::compact, p, p), 0.0, 1e-7);
    }
  }
}

TEST(Metrics, DistanceIsInvariantUnderIsometries) {
  Rng rng(173);
  for (auto [d, n] : fixture::all()) {
    const ModuleSpec spec = make_module(d, n);
    const TransformWord u = random_u_word(spec, rng);
    for (int s = 0; s < 5; ++s) {
      const CPWPoint p = random_point(spec, rng), q = random_point(spec, rng);
      EXPECT_NEAR(distance(spec, Model::compact, apply_word(spec, u, p), apply_word(spec, u, q)),
                  distance(spec, Model::compact, p, q), 1e-9)
          << d << "," << n;
    }
  }
}

TEST(Metrics, FarPointsApproachTheirLineAtInfinity) {
  const ModuleSpec spec = make_module(4, 1);
  Rng rng(179);
  const WVec w = rng.unit(8);
  const CPWPoint line_at_infinity = infinity_of(spec, w);
  const WVec other = scalar_multiple(spec, w, rng);
  EXPECT_NEAR(distance(spec, Model::compact, CPWPoint::finite(other.normalized() * 1e8), line_at_infinity), 0.0, 1e-7);
}

TEST(Metrics, SectionalCurvatureExtremes) {
  Rng rng(181);
  for (auto [d, n] : fixture::with_v()) {
    const ModuleSpec spec = make_module(d, n);
    const WVec x = standard_w(spec, 0);
    const WVec v_dir = standard_w(spec, 1);
    EXPECT_NEAR(sectional_curvature(spec, x, v_dir), 1.0, 1e-12);
    EXPECT_NEAR(sectional_curvature(spec, x, v_dir, Model::ball), -1.0, 1e-12);
    if (d > 1) {
      const WVec z_dir = WVec::Unit(spec.dim_w(), 1);
      EXPECT_NEAR(sectional_curvature(spec, x, z_dir), 4.0, 1e-12);
      EXPECT_NEAR(sectional_curvature(spec, x, z_dir, Model::ball), -4.0, 1e-12);
    }
    auto [a, b] = random_orthonormal_pair(spec, rng);
    const double k = sectional_curvature(spec, a, b);
    EXPECT_GE(k, 1.0 - 1e-12);
    EXPECT_LE(k, 4.0 + 1e-12);
  }
}

TEST(Metrics, CircleLengthsAtTheOrigin) {
  const ModuleSpec spec = make_module(2, 1);
  const WVec x = standard_w(spec, 0), v_dir = standard_w(spec, 1), z_dir = WVec::Unit(4, 1);
  const double r = 0.1;
  EXPECT_NEAR(curvature_circle_estimate(spec, x, v_dir, r).length_closed, 2 * M_PI * std::sin(r), 1e-14);
  EXPECT_NEAR(curvature_circle_estimate(spec, x, z_dir, r).length_closed, M_PI * std::sin(2 * r), 1e-14);
  EXPECT_NEAR(curvature_circle_estimate(spec, x, v_dir, r, Model::ball).length_closed, 2 * M_PI * std::sinh(r), 1e-14);
  EXPECT_NEAR(curvature_circle_estimate(spec, x, z_dir, r, Model::ball).length_closed, M_PI * std::sinh(2 * r), 1e-14);
  EXPECT_RANKONE_ERROR(curvature_circle_estimate(spec, x, v_dir, 0.7), ErrorCode::domain);
}

TEST(Metrics, CircleEstimateApproachesCurvature) {
  Rng rng(191);
  for (auto [d, n] : {std::pair{2, 1}, {4, 1}, {8, 1}, {1, 2}}) {
    const ModuleSpec spec = make_module(d, n);
    auto [x, y] = random_orthonormal_pair(spec, rng);
    for (auto model : {Model::compact, Model::ball}) {
      const double k = sectional_curvature(spec, x, y, model);
      const CircleEstimate est = curvature_circle_estimate(spec, x, y, 0.05, model);
      EXPECT_NEAR(est.length_numeric, est.length_closed, 1e-8 * est.length_closed);
      EXPECT_NEAR(est.estimate, k, 0.05);
      EXPECT_NEAR(curvature_extrapolated(spec, x, y, 0.05, model), k, 1e-4) << d << "," << n;
    }
  }
}

TEST(Metrics, JacobiProfiles) {
  const ModuleSpec spec = make_module(4, 1);
  const WVec x = standard_w(spec, 0), v_dir = standard_w(spec, 1), z_dir = WVec::Unit(8, 2);
  EXPECT_EQ(jacobi_kind(spec, x, z_dir), JacobiKind::z_type);
  EXPECT_EQ(jacobi_kind(spec, x, v_dir), JacobiKind::v_type);
  EXPECT_NEAR(jacobi_profile(spec, x, z_dir, M_PI / 4), 0.5, 1e-14);
  EXPECT_NEAR(jacobi_profile(spec, x, v_dir, M_PI / 4), std::sqrt(0.5), 1e-14);
  for (double t : {0.1, 0.5, 1.0, 1.4}) {
    EXPECT_NEAR(jacobi_profile(spec, x, z_dir, t), std::sin(t) * std::cos(t), 1e-13);
    EXPECT_NEAR(jacobi_profile(spec, x, v_dir, t), std::sin(t), 1e-13);
  }
  const WVec mixed = (z_dir + v_dir).normalized();
  EXPECT_RANKONE_ERROR(jacobi_kind(spec, x, mixed), ErrorCode::mixed_type);
}

TEST(Metrics, DoubleCoverIdentifiesAntipodes) {
  const ModuleSpec spec = make_module(1, 2);
  EXPECT_EQ(double_cover_source(spec).d, 3);
  const WVec w = WVec::Constant(3, 0.5 / std::sqrt(3.0));
  EXPECT_LT((double_cover(spec, w) - 8.0 * w / 3.0).norm(), 1e-14);
  EXPECT_LT((double_cover(spec, WVec(-4.0 * w)) - 8.0 * w / 3.0).norm(), 1e-14);
  EXPECT_RANKONE_ERROR(double_cover(make_module(2, 1), WVec::Zero(4)), ErrorCode::domain);
}

TEST(Metrics, TotallyGeodesicFixedSpaces) {
  struct Request {
    int d, n, d0, n0;
  };
  for (const Request& req : {Request{2, 2, 1, 2}, Request{4, 1, 2, 1}, Request{8, 1, 4, 1}, Request{4, 2, 1, 1},
                             Request{4, 1, 2, 0}, Request{3, 0, 2, 0}}) {
    if (req.n == 0 && req.d == 3) {
      // d = 3 is only a sphere, where O(d) acts and any linear subspace is fixed by a reflection.
      const TotallyGeodesicSpec tg = totally_geodesic(make_module(3, 0), 2, 0);
      EXPECT_EQ(common_fixed_space(tg.involutions, 3).cols(), 2);
      continue;
    }
    const ModuleSpec spec = make_module(req.d, req.n);
    const TotallyGeodesicSpec tg = totally_geodesic(spec, req.d0, req.n0);
    const Mat fixed = common_fixed_space(tg.involutions, spec.dim_w());
    EXPECT_EQ(fixed.cols(), req.d0 * (req.n0 + 1));
    EXPECT_LT((fixed * fixed.transpose() - tg.w0_basis * tg.w0_basis.transpose()).norm(), 1e-10);
    for (const Mat& inv : tg.involutions) {
      EXPECT_LT((inv * inv - Mat::Identity(spec.dim_w(), spec.dim_w())).norm(), 1e-12);
      EXPECT_TRUE(is_k_member(spec, inv));
    }
  }
  EXPECT_RANKONE_ERROR(totally_geodesic(make_module(4, 1), 3, 0), ErrorCode::no_closed_subalgebra);
  EXPECT_RANKONE_ERROR(totally_geodesic(make_module(8, 1), 3, 1), ErrorCode::no_closed_subalgebra);
  EXPECT_RANKONE_ERROR(totally_geodesic(make_module(2, 1), 1, 2), ErrorCode::domain);
}
