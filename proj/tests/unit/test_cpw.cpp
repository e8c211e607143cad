#include <gtest/gtest.h>

#include <complex>

#include "helpers.hpp"
#include "rankone/cpw.hpp"

using namespace rankone;

namespace {

std::complex<double> as_complex(const Vec& x, Eigen::Index block) { return {x(2 * block), x(2 * block + 1)}; }

}  // namespace

TEST(Cpw, InversionMatchesComplexFormula) {
  const ModuleSpec spec = make_module(2, 2);
  Rng rng(127);
  for (int s = 0; s < 10; ++s) {
    const WVec w = rng.gaussian(6);
    const CPWPoint image = phi0(spec, CPWPoint::finite(w));
    ASSERT_TRUE(image.is_finite());
    const std::complex<double> inv = 1.0 / as_complex(w, 0);
    for (Eigen::Index b = 0; b < 3; ++b) {
      const std::complex<double> expected = b == 0 ? inv : inv * as_complex(w, b);
      EXPECT_NEAR(std::abs(as_complex(image.w(), b) - expected), 0.0, 1e-12);
    }
  }
}

TEST(Cpw, InversionIsAnInvolution) {
  Rng rng(131);
  for (auto [d, n] : fixture::all()) {
    const ModuleSpec spec = make_module(d, n);
    for (int s = 0; s < 10; ++s) {
      const CPWPoint p = random_point(spec, rng, 0.3);
      EXPECT_TRUE(points_equal(spec, phi0(spec, phi0(spec, p)), p)) << d << "," << n;
    }
    const CPWPoint origin = CPWPoint::finite(WVec::Zero(spec.dim_w()));
    const CPWPoint c_line = infinity_of(spec, standard_w(spec, 0));
    EXPECT_TRUE(points_equal(spec, phi0(spec, origin), c_line));
    EXPECT_TRUE(points_equal(spec, phi0(spec, c_line), origin));
  }
}

TEST(Cpw, PointsInVHaveTheirOwnInfinity) {
  const ModuleSpec spec = make_module(4, 1);
  const VVec u = standard_v(spec, 1);
  const CPWPoint finite_v = CPWPoint::finite(join(CNum::Zero(4), u));
  const CPWPoint image = phi0(spec, finite_v);
  ASSERT_FALSE(image.is_finite());
  const InfinityForm form = infinity_form(spec, image.line());
  EXPECT_FALSE(form.in_v);
  EXPECT_LT((form.v - u).norm(), 1e-12);
  const CPWPoint in_v = infinity_of(spec, join(CNum::Zero(4), u));
  EXPECT_TRUE(infinity_form(spec, in_v.line()).in_v);
  EXPECT_TRUE(points_equal(spec, phi0(spec, in_v), in_v));
}

TEST(Cpw, InfinityFormRecoversSlope) {
  Rng rng(137);
  for (auto [d, n] : fixture::with_v()) {
    const ModuleSpec spec = make_module(d, n);
    const VVec v = rng.gaussian(spec.vdim);
    const CNum zeta = rng.gaussian(d);
    // [zeta, zeta v] is the same point as [1, v].
    const CPWPoint p = infinity_of(spec, join(zeta, j_apply(spec, zeta, v)));
    const InfinityForm form = infinity_form(spec, p.line());
    EXPECT_FALSE(form.in_v);
    EXPECT_LT((form.v - v).norm(), 1e-10) << d << "," << n;
    EXPECT_TRUE(points_equal(spec, p, infinity_of(spec, join(unit_element(d), v))));
  }
}

TEST(Cpw, ChartsCoverEveryPoint) {
  const ModuleSpec spec = make_module(2, 2);
  EXPECT_EQ(chart_cover_index(spec, CPWPoint::finite(WVec::Ones(6))), 3);
  EXPECT_EQ(chart_cover_index(spec, infinity_of(spec, standard_w(spec, 0))), 0);
  EXPECT_EQ(chart_cover_index(spec, infinity_of(spec, standard_w(spec, 2))), 2);
  Rng rng(139);
  for (int s = 0; s < 20; ++s) {
    const CPWPoint p = random_point(spec, rng, 0.5);
    const int j = chart_cover_index(spec, p);
    // phi_j moves the covered point into the finite chart.
    EXPECT_TRUE(phi_j(spec, j, p).is_finite()) << j;
    EXPECT_TRUE(points_equal(spec, phi_j(spec, j, phi_j(spec, j, p)), p)) << j;
  }
}

TEST(Cpw, SwapMatrixIsInK) {
  const ModuleSpec spec = make_module(4, 2);
  for (int j = 1; j <= 2; ++j) {
    const Mat psi = psi_matrix(spec, j);
    EXPECT_TRUE(is_k_member(spec, psi));
    EXPECT_LT((psi * psi - Mat::Identity(12, 12)).norm(), 1e-15);
  }
  EXPECT_RANKONE_ERROR(psi_matrix(spec, 3), ErrorCode::domain);
}

TEST(Cpw, HopfFibersAreUnitScalarOrbits) {
  Rng rng(149);
  for (auto [d, n] : fixture::all()) {
    const ModuleSpec spec = make_module(d, n);
    const WVec w = rng.unit(spec.dim_w());
    const CPWPoint base = hopf(spec, w);
    for (int s = 0; s < 3; ++s) {
      const WVec moved = cline_through(spec, w).frame().transpose() * rng.unit(d);
      EXPECT_TRUE(points_equal(spec, hopf(spec, moved), base)) << d << "," << n;
    }
    EXPECT_RANKONE_ERROR(hopf(spec, 2.0 * w), ErrorCode::non_unit);
  }
}

TEST(Cpw, AffineClosureMembership) {
  const ModuleSpec spec = make_module(2, 2);
  const WVec offset = WVec::LinSpaced(6, 0.5, 3.0);
  const Mat e = cline_through(spec, standard_w(spec, 1)).frame().transpose();
  const AffineClosure closure = closure_of_affine(spec, offset, e);
  EXPECT_EQ(closure.basis.cols(), 2);
  ASSERT_EQ(closure.cbasis.size(), 1u);
  const WVec inside = offset + 0.7 * standard_w(spec, 1) - 1.3 * WVec::Unit(6, 3);
  EXPECT_TRUE(closure.contains(spec, CPWPoint::finite(inside)));
  EXPECT_FALSE(closure.contains(spec, CPWPoint::finite(offset + standard_w(spec, 2))));
  EXPECT_TRUE(closure.contains(spec, infinity_of(spec, WVec::Unit(6, 3))));
  EXPECT_FALSE(closure.contains(spec, infinity_of(spec, standard_w(spec, 0))));
}

TEST(Cpw, RandomPointRespectsFraction) {
  const ModuleSpec spec = make_module(1, 2);
  Rng rng(151);
  for (int s = 0; s < 20; ++s) {
    EXPECT_TRUE(random_point(spec, rng, 0.0).is_finite());
    EXPECT_FALSE(random_point(spec, rng, 1.0).is_finite());
  }
}
