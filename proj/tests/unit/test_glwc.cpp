#include <gtest/gtest.h>

#include "helpers.hpp"
#include "rankone/glwc.hpp"

using namespace rankone;

namespace {

// Scales of g = k a n for real C: with the reversal permutation P, g P = (k P)(P a n P)
// is a QR factorization, so the scales are the absolute R-diagonal in reverse order.
Vec real_iwasawa_scales(const Mat& g) {
  const Eigen::Index size = g.cols();
  const Mat reversed = g.rowwise().reverse();
  Eigen::HouseholderQR<Mat> qr(reversed);
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  Vec out(size);
  for (Eigen::Index j = 0; j < size; ++j) out(size - 1 - j) = std::abs(r(j, j));
  return out;
}

}  // namespace

TEST(Glwc, LambdaRoundTrip) {
  Rng rng(79);
  for (auto [d, n] : fixture::with_v()) {
    const ModuleSpec spec = make_module(d, n);
    const LambdaMatrix lambda = random_lambda(spec, rng);
    const Mat unip = n_from_lambda(spec, lambda);
    EXPECT_LT(lambda_from_n(spec, unip).max_abs_diff(lambda), 1e-14) << d << "," << n;
    EXPECT_TRUE(is_glwc(spec, unip)) << d << "," << n;
  }
}

TEST(Glwc, LambdaComposeMatchesProduct) {
  Rng rng(83);
  for (int d : {1, 2, 4}) {
    const ModuleSpec spec = make_module(d, 3);
    const LambdaMatrix l1 = random_lambda(spec, rng), l2 = random_lambda(spec, rng);
    const Mat product = n_from_lambda(spec, l1) * n_from_lambda(spec, l2);
    EXPECT_LT(lambda_compose(spec, l1, l2).max_abs_diff(lambda_from_n(spec, product)), 1e-13) << d;
  }
  const ModuleSpec octo = make_module(8, 1);
  EXPECT_RANKONE_ERROR(lambda_compose(octo, random_lambda(octo, rng), random_lambda(octo, rng)), ErrorCode::domain);
}

TEST(Glwc, MembershipOfStandardFamilies) {
  Rng rng(89);
  const ModuleSpec spec = make_module(2, 2);
  Mat real = Mat::Random(3, 3) + 3.0 * Mat::Identity(3, 3);
  EXPECT_TRUE(is_glwc(spec, real_block_matrix(spec, real)));
  EXPECT_TRUE(is_glwc(spec, random_adiag(spec, rng).matrix(spec)));
  EXPECT_TRUE(is_glwc(spec, random_glwc(spec, rng)));
  const Mat generic = Mat::Identity(6, 6) + 0.3 * Mat(rng.gaussian(36).reshaped(6, 6));
  EXPECT_FALSE(is_glwc(spec, generic));
  EXPECT_RANKONE_ERROR(is_glwc(spec, Mat::Zero(6, 6)), ErrorCode::singular_system);
}

TEST(Glwc, IwasawaRoundTrip) {
  Rng rng(97);
  for (auto [d, n] : fixture::with_v()) {
    const ModuleSpec spec = make_module(d, n);
    for (int s = 0; s < 5; ++s) {
      const Mat g = random_glwc(spec, rng);
      const Iwasawa kan = iwasawa(spec, g);
      EXPECT_LT(kan.residual, 1e-10 * op_norm(g)) << d << "," << n;
      EXPECT_LT(op_norm(g - kan.k * kan.a.matrix(spec) * kan.n), 1e-10 * op_norm(g));
      EXPECT_TRUE(is_k_member(spec, kan.k));
      EXPECT_GT(kan.a.t.minCoeff(), 0.0);
      EXPECT_LT((n_from_lambda(spec, kan.lambda) - kan.n).norm(), 1e-10);
    }
  }
}

TEST(Glwc, IwasawaRecoversKnownFactors) {
  Rng rng(101);
  for (auto [d, n] : fixture::with_v()) {
    const ModuleSpec spec = make_module(d, n);
    const KMatrix k = random_k(spec, rng);
    const ADiag a = random_adiag(spec, rng);
    const LambdaMatrix lambda = random_lambda(spec, rng);
    const Iwasawa kan = iwasawa(spec, k * a.matrix(spec) * n_from_lambda(spec, lambda));
    EXPECT_LT((kan.a.t - a.t).norm(), 1e-12) << d << "," << n;
    EXPECT_LT(kan.lambda.max_abs_diff(lambda), 1e-12) << d << "," << n;
    EXPECT_LT((kan.k - k).norm(), 1e-12) << d << "," << n;
  }
}

TEST(Glwc, IwasawaMatchesQrForRealScalars) {
  Rng rng(103);
  const ModuleSpec spec = make_module(1, 4);
  const Mat g = Mat::Identity(5, 5) * 2.0 + Mat(rng.gaussian(25).reshaped(5, 5));
  const Iwasawa kan = iwasawa(spec, g);
  EXPECT_LT((kan.a.t - real_iwasawa_scales(g)).norm(), 1e-12);
}

TEST(Glwc, CartanMatchesSingularValues) {
  Rng rng(107);
  for (auto [d, n] : fixture::with_v()) {
    const ModuleSpec spec = make_module(d, n);
    const Mat g = random_glwc(spec, rng);
    const Cartan kak = cartan(spec, g);
    EXPECT_LT(kak.residual, 1e-10 * op_norm(g)) << d << "," << n;
    EXPECT_TRUE(is_k_member(spec, kak.k1));
    EXPECT_TRUE(is_k_member(spec, kak.k2));
    const Vec sv = Eigen::JacobiSVD<Mat>(g).singularValues();
    for (int j = 0; j <= n; ++j) {
      if (j > 0) EXPECT_GE(kak.a.t(j - 1), kak.a.t(j));
      for (int i = 0; i < d; ++i) EXPECT_NEAR(sv(j * d + i), kak.a.t(j), 1e-10 * sv(0));
    }
  }
}

TEST(Glwc, DecompositionsNeedNonzeroV) {
  const ModuleSpec spec = make_module(4, 0);
  EXPECT_RANKONE_ERROR(iwasawa(spec, Mat::Identity(4, 4)), ErrorCode::domain);
  EXPECT_RANKONE_ERROR(cartan(spec, Mat::Identity(4, 4)), ErrorCode::domain);
}

TEST(Glwc, TripleFormOfShear) {
  Rng rng(109);
  for (int d : {1, 2, 4}) {
    const ModuleSpec spec = make_module(d, 1);
    const LambdaMatrix lambda = random_lambda(spec, rng);
    const Mat shear = n_from_lambda(spec, lambda);
    const TripleForm form = triple_form(spec, shear);
    EXPECT_LT((form.alpha - Mat::Identity(d, d)).norm(), 1e-14) << d;
    EXPECT_LT((form.phi - Mat::Identity(d, d)).norm(), 1e-14) << d;
    EXPECT_LT((form.v0 - j_apply(spec, lambda.at(1, 0), standard_v(spec, 1))).norm(), 1e-13) << d;
    EXPECT_RANKONE_ERROR(triple_form(spec, Mat(shear.transpose())), ErrorCode::v_not_preserved);
  }
}

TEST(Glwc, LinesStayConformal) {
  Rng rng(113);
  const ModuleSpec spec = make_module(4, 2);
  const Mat g = random_glwc(spec, rng);
  for (int s = 0; s < 5; ++s) EXPECT_LT(line_restriction_spread(spec, g, rng.gaussian(12)), 1e-10);
  const Mat generic = Mat::Identity(12, 12) + 0.3 * Mat(rng.gaussian(144).reshaped(12, 12));
  EXPECT_GT(line_restriction_spread(spec, generic, rng.gaussian(12)), 1e-3);
}
