#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "rankone/wspace.hpp"

using namespace rankone;

namespace {

// Independent C-line projector: orthonormalize {J-action of e_i on w} by Gram-Schmidt.
Mat line_projector_oracle(const ModuleSpec& spec, const WVec& w) {
  Mat span(spec.dim_w(), spec.d);
  const CNum zeta = zeta_part(spec, w);
  const VVec v = v_part(spec, w);
  for (int i = 0; i < spec.d; ++i) {
    const CNum e = basis_element(spec.d, i);
    // e (zeta, v) = (e zeta, e v), with the product in C taken as J on the C block.
    const CNum ez = spec.vdim > 0 ? mult_v(spec, e, zeta, standard_v(spec, 1)) : CNum(zeta);
    span.col(i) = join(ez, j_apply(spec, e, v));
  }
  Mat q = span;
  for (int i = 0; i < q.cols(); ++i) {
    for (int j = 0; j < i; ++j) q.col(i) -= q.col(j).dot(q.col(i)) * q.col(j);
    q.col(i).normalize();
  }
  return q * q.transpose();
}

}  // namespace

TEST(WSpace, SplitAndJoin) {
  const ModuleSpec spec = make_module(4, 2);
  const WVec w = Vec::LinSpaced(12, 1.0, 12.0);
  EXPECT_EQ(join(zeta_part(spec, w), v_part(spec, w)), w);
  EXPECT_EQ(zeta_part(spec, w).size(), 4);
  EXPECT_EQ(standard_w(spec, 0), WVec::Unit(12, 0));
  EXPECT_EQ(standard_w(spec, 2), WVec::Unit(12, 8));
}

TEST(WSpace, LineThroughMatchesGramSchmidt) {
  Rng rng(41);
  for (auto [d, n] : {std::pair{2, 1}, {4, 1}, {4, 2}}) {
    const ModuleSpec spec = make_module(d, n);
    const WVec w = rng.gaussian(spec.dim_w());
    const CLine line = cline_through(spec, w);
    EXPECT_LT((line.projector() - line_projector_oracle(spec, w)).norm(), 1e-12) << d << "," << n;
    EXPECT_LT((line.projector() * w - w).norm(), 1e-12);
  }
}

TEST(WSpace, LineIsClosedUnderScalars) {
  Rng rng(43);
  for (auto [d, n] : fixture::with_v()) {
    const ModuleSpec spec = make_module(d, n);
    const WVec w = rng.gaussian(spec.dim_w());
    const CLine line = cline_through(spec, w);
    ASSERT_EQ(line.frame().rows(), d);
    EXPECT_LT((line.frame() * line.frame().transpose() - Mat::Identity(d, d)).norm(), 1e-13);
    for (int s = 0; s < 4; ++s) {
      const WVec other = line.frame().transpose() * rng.gaussian(d);
      EXPECT_TRUE(lines_equal(line, cline_through(spec, other))) << d << "," << n;
    }
    EXPECT_RANKONE_ERROR(cline_through(spec, WVec::Zero(spec.dim_w())), ErrorCode::zero_vector);
  }
}

TEST(WSpace, LineAngleExtremes) {
  const ModuleSpec spec = make_module(2, 1);
  const WVec w = standard_w(spec, 0);
  EXPECT_NEAR(cline_angle(spec, w, w), 0.0, 1e-7);
  EXPECT_NEAR(cline_angle(spec, w, standard_w(spec, 1)), M_PI / 2, 1e-12);
  const WVec diag = (standard_w(spec, 0) + standard_w(spec, 1)) / std::sqrt(2.0);
  EXPECT_NEAR(cline_angle(spec, w, diag), M_PI / 4, 1e-12);
}

TEST(WSpace, OrthonormalCBasis) {
  for (auto [d, n] : fixture::all()) {
    const ModuleSpec spec = make_module(d, n);
    const std::vector<WVec> basis = onb_cbasis(spec);
    ASSERT_EQ(static_cast<int>(basis.size()), n + 1);
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = 0; j < basis.size(); ++j) {
        const Mat cross = cline_through(spec, basis[i]).frame() * cline_through(spec, basis[j]).frame().transpose();
        if (i == j)
          EXPECT_LT((cross - Mat::Identity(d, d)).norm(), 1e-12);
        else
          EXPECT_LT(cross.norm(), 1e-12);
      }
  }
}

TEST(WSpace, KToPointAndFrame) {
  Rng rng(47);
  for (auto [d, n] : fixture::all()) {
    const ModuleSpec spec = make_module(d, n);
    const WVec target = rng.unit(spec.dim_w());
    const KMatrix k = k_to_point(spec, target);
    EXPECT_LT((k * standard_w(spec, 0) - target).norm(), 1e-12) << d << "," << n;
    EXPECT_TRUE(is_k_member(spec, k)) << d << "," << n;

    const KMatrix random = random_k(spec, rng);
    EXPECT_TRUE(is_k_member(spec, random));
    std::vector<WVec> frame;
    for (int j = 0; j <= n; ++j) frame.push_back(random * standard_w(spec, j));
    const KMatrix rebuilt = k_from_frame(spec, frame);
    for (int j = 0; j <= n; ++j) EXPECT_LT((rebuilt * standard_w(spec, j) - frame[j]).norm(), 1e-10);
    EXPECT_TRUE(is_k_member(spec, rebuilt));
  }
}

TEST(WSpace, GenericOrthogonalMapIsNotInK) {
  Rng rng(53);
  const ModuleSpec spec = make_module(2, 1);
  const Eigen::HouseholderQR<Mat> qr(Mat(rng.gaussian(16).reshaped(4, 4)));
  const Mat q = qr.householderQ();
  EXPECT_FALSE(is_k_member(spec, q));
  EXPECT_GT(line_preservation_residual(spec, q, 8, 59), 1e-3);
}

TEST(WSpace, RotationAndStabilizerElements) {
  Rng rng(61);
  for (auto [d, n] : fixture::with_v()) {
    const ModuleSpec spec = make_module(d, n);
    const VVec v0 = rng.unit(spec.vdim);
    const KMatrix sigma = sigma_rot(spec, v0, 0.3);
    EXPECT_TRUE(is_k_member(spec, sigma)) << d << "," << n;
    const KMatrix quarter = sigma_rot(spec, v0, M_PI / 2);
    EXPECT_LT((quarter * standard_w(spec, 0) - join(CNum::Zero(d), v0)).norm(), 1e-12);
    if (d == 1) continue;
    CNum z = rng.gaussian(d);
    z(0) = 0.0;
    z.normalize();
    const KMatrix m = m_alpha(spec, {z});
    EXPECT_TRUE(is_k_member(spec, m));
    EXPECT_LT((m * standard_w(spec, 0) - standard_w(spec, 0)).norm(), 1e-12);
  }
}

TEST(WSpace, StabilizerTransport) {
  Rng rng(67);
  for (auto [d, n] : {std::pair{2, 1}, {2, 2}, {4, 1}, {4, 2}, {8, 1}}) {
    const ModuleSpec spec = make_module(d, n);
    CNum z = rng.gaussian(d), z2 = rng.gaussian(d);
    z(0) = z2(0) = 0.0;
    z.normalize();
    z2.normalize();
    const VVec v = rng.unit(spec.vdim), v2 = rng.unit(spec.vdim);
    const KMatrix m = m_transport(spec, z, v, z2, v2);
    EXPECT_TRUE(is_k_member(spec, m)) << d << "," << n;
    EXPECT_LT((m * join(z, VVec::Zero(spec.vdim)) - join(z2, VVec::Zero(spec.vdim))).norm(), 1e-10);
    EXPECT_LT((m * join(CNum::Zero(d), v) - join(CNum::Zero(d), v2)).norm(), 1e-10);
  }
  const ModuleSpec spec = make_module(2, 1);
  const CNum i = basis_element(2, 1);
  const KMatrix flip = m_transport(spec, i, standard_v(spec, 1), CNum(-i), standard_v(spec, 1));
  EXPECT_TRUE(is_k_member(spec, flip));
}

TEST(WSpace, RhoIsInK) {
  Rng rng(71);
  for (int d : {2, 4}) {
    const ModuleSpec spec = make_module(d, 1);
    CNum z = rng.gaussian(d);
    z(0) = 0.0;
    z.normalize();
    EXPECT_TRUE(is_k_member(spec, rho_t(spec, z, 0.4))) << d;
  }
}

TEST(WSpace, MapLineFollowsLinearMap) {
  Rng rng(73);
  const ModuleSpec spec = make_module(4, 1);
  const KMatrix k = random_k(spec, rng);
  const WVec w = rng.gaussian(spec.dim_w());
  EXPECT_TRUE(lines_equal(map_line(k, cline_through(spec, w)), cline_through(spec, k * w)));
}
