#include <gtest/gtest.h>

#include <complex>

#include "helpers.hpp"
#include "rankone/clifford.hpp"

using namespace rankone;

namespace {

// Independent quaternion product on (w, x, y, z) coordinates with i j = sign k.
CNum hamilton(const CNum& a, const CNum& b, double sign) {
  CNum out(4);
  out(0) = a(0) * b(0) - a(1) * b(1) - a(2) * b(2) - a(3) * b(3);
  out(1) = a(0) * b(1) + a(1) * b(0) + sign * (a(2) * b(3) - a(3) * b(2));
  out(2) = a(0) * b(2) + a(2) * b(0) + sign * (a(3) * b(1) - a(1) * b(3));
  out(3) = a(0) * b(3) + a(3) * b(0) + sign * (a(1) * b(2) - a(2) * b(1));
  return out;
}

}  // namespace

TEST(Clifford, RejectsUndefinedDimensions) {
  EXPECT_RANKONE_ERROR(make_module(3, 1), ErrorCode::invalid_dimensions);
  EXPECT_RANKONE_ERROR(make_module(8, 2), ErrorCode::invalid_dimensions);
  EXPECT_RANKONE_ERROR(make_module(2, -1), ErrorCode::invalid_dimensions);
  EXPECT_NO_THROW(make_module(8, 0));
  EXPECT_NO_THROW(make_module(1, 5));
}

TEST(Clifford, GeneratorsSatisfyCliffordRelations) {
  for (auto [d, n] : fixture::with_v()) {
    const ModuleSpec spec = make_module(d, n);
    ASSERT_EQ(spec.vdim, n * d);
    const Mat id = Mat::Identity(spec.vdim, spec.vdim);
    EXPECT_LT((spec.gens[0] - id).norm(), 1e-15);
    for (int i = 1; i < d; ++i)
      for (int j = 1; j < d; ++j) {
        const Mat anti = spec.gens[i] * spec.gens[j] + spec.gens[j] * spec.gens[i];
        const Mat expected = i == j ? Mat(-2.0 * id) : Mat(Mat::Zero(spec.vdim, spec.vdim));
        EXPECT_LT((anti - expected).norm(), 1e-14) << d << "," << n << " i=" << i << " j=" << j;
      }
  }
}

TEST(Clifford, ValidateRejectsBrokenGenerators) {
  ModuleSpec spec = make_module(2, 1);
  spec.gens[1] *= 1.5;
  EXPECT_RANKONE_ERROR(validate_module(spec), ErrorCode::validation);
  spec = make_module(4, 1);
  spec.gens.pop_back();
  EXPECT_RANKONE_ERROR(validate_module(spec), ErrorCode::validation);
}

TEST(Clifford, ComplexProductMatchesStdComplex) {
  const ModuleSpec spec = make_module(2, 1);
  Rng rng(7);
  for (int s = 0; s < 20; ++s) {
    const CNum a = rng.gaussian(2), b = rng.gaussian(2);
    const std::complex<double> oracle = std::complex<double>(a(0), a(1)) * std::complex<double>(b(0), b(1));
    const CNum got = mult_v(spec, a, b, rng.unit(2));
    EXPECT_NEAR(got(0), oracle.real(), 1e-13);
    EXPECT_NEAR(got(1), oracle.imag(), 1e-13);
  }
}

TEST(Clifford, QuaternionProductMatchesHamilton) {
  const ModuleSpec spec = make_module(4, 2);
  const CNum e1 = basis_element(4, 1), e2 = basis_element(4, 2), e3 = basis_element(4, 3);
  const CNum prod = mult_v(spec, e1, e2, standard_v(spec, 1));
  const double sign = prod.dot(e3);
  ASSERT_NEAR(std::abs(sign), 1.0, 1e-14);
  Rng rng(11);
  for (int s = 0; s < 20; ++s) {
    const CNum a = rng.gaussian(4), b = rng.gaussian(4);
    const VVec v = rng.unit(spec.vdim);
    EXPECT_LT((mult_v(spec, a, b, v) - hamilton(a, b, sign)).norm(), 1e-13);
  }
}

TEST(Clifford, OctonionProductIsAlternativeAndNormed) {
  const ModuleSpec spec = make_module(8, 1);
  const VVec v = standard_v(spec, 1);
  Rng rng(13);
  for (int s = 0; s < 20; ++s) {
    const CNum x = rng.gaussian(8), y = rng.gaussian(8);
    const CNum xx_y = mult_v(spec, mult_v(spec, x, x, v), y, v);
    const CNum x_xy = mult_v(spec, x, mult_v(spec, x, y, v), v);
    EXPECT_LT((xx_y - x_xy).norm(), 1e-12 * (1.0 + xx_y.norm()));
    EXPECT_NEAR(mult_v(spec, x, y, v).norm(), x.norm() * y.norm(), 1e-12 * x.norm() * y.norm());
  }
}

TEST(Clifford, AssociativityDetectsOctonions) {
  for (int d : {1, 2, 4}) {
    const AssociativityReport report = is_associative(make_module(d, 1), 50);
    EXPECT_TRUE(report.associative) << d;
    EXPECT_TRUE(report.cross_check_passed) << d;
    EXPECT_LT(report.max_variation, 1e-12) << d;
  }
  const ModuleSpec spec = make_module(8, 1);
  const AssociativityReport report = is_associative(spec, 50);
  EXPECT_FALSE(report.associative);
  ASSERT_TRUE(report.witness_gap.has_value());
  EXPECT_GT(*report.witness_gap, 1e-3);
  const CNum p = mult_v(spec, report.witness_zeta, report.witness_eta, report.witness_v);
  const CNum q = mult_v(spec, report.witness_zeta, report.witness_eta, report.witness_v2);
  EXPECT_NEAR((p - q).norm(), *report.witness_gap, 1e-12);
}

TEST(Clifford, InverseAndConjugate) {
  Rng rng(17);
  for (int d : {1, 2, 4, 8}) {
    const ModuleSpec spec = make_module(d, 1);
    const CNum z = rng.gaussian(d);
    const VVec v = rng.unit(spec.vdim);
    EXPECT_LT((mult_v(spec, c_inverse(z), z, v) - unit_element(d)).norm(), 1e-13);
    EXPECT_LT((mult_v(spec, z, conj(z), v) - z.squaredNorm() * unit_element(d)).norm(), 1e-12);
    EXPECT_NEAR(re(z), z(0), 0.0);
  }
  EXPECT_RANKONE_ERROR(c_inverse(CNum::Zero(4)), ErrorCode::zero_divisor);
}

TEST(Clifford, DivisionBackSubstitutes) {
  Rng rng(19);
  for (int d : {2, 4, 8}) {
    const ModuleSpec spec = make_module(d, 1);
    const CNum z = rng.gaussian(d), e = rng.gaussian(d);
    const VVec v = rng.unit(spec.vdim);
    const CNum left = divide(spec, z, e, v, Side::left);
    const CNum right = divide(spec, z, e, v, Side::right);
    EXPECT_LT((mult_v(spec, left, e, v) - z).norm(), 1e-12);
    EXPECT_LT((mult_v(spec, e, right, v) - z).norm(), 1e-12);
    EXPECT_RANKONE_ERROR(divide(spec, z, CNum::Zero(d), v, Side::left), ErrorCode::zero_divisor);
  }
}

TEST(Clifford, ApplyComplexSquaresInSubalgebra) {
  const ModuleSpec spec = make_module(8, 1);
  Rng rng(23);
  const CNum z = rng.gaussian(8);
  const CNum sq = apply_complex(z, [](std::complex<double> c) { return c * c; });
  EXPECT_LT((sq - mult_v(spec, z, z, standard_v(spec, 1))).norm(), 1e-12);
  const CNum inv = apply_complex(z, [](std::complex<double> c) { return 1.0 / c; });
  EXPECT_LT((inv - c_inverse(z)).norm(), 1e-12);
}

TEST(Clifford, CompositionIdentitiesHold) {
  for (auto [d, n] : fixture::all()) {
    const CompositionReport report = verify_composition(make_module(d, n), 40, 29);
    EXPECT_LT(report.max_violation(), 1e-12) << d << "," << n;
  }
}

TEST(Clifford, J2Decision) {
  for (auto [d, n] : fixture::with_v()) EXPECT_TRUE(verify_j2(make_module(d, n), 30, 31)) << d << "," << n;
  for (auto kind : {NonJ2Kind::d3, NonJ2Kind::d4_mixed}) {
    const ModuleSpec spec = make_non_j2_module(kind);
    EXPECT_FALSE(verify_j2(spec, 30, 31));
    EXPECT_GT(j2_residual(spec, 30, 31), 0.1);
  }
}

TEST(Clifford, BracketIsDualToJ) {
  Rng rng(37);
  for (auto [d, n] : fixture::with_v()) {
    if (d == 1) continue;
    const ModuleSpec spec = make_module(d, n);
    const VVec v = rng.gaussian(spec.vdim), u = rng.gaussian(spec.vdim);
    CNum z = rng.gaussian(d);
    z(0) = 0.0;
    const CNum bracket = htype_bracket(spec, v, u);
    EXPECT_NEAR(bracket(0), 0.0, 1e-14);
    EXPECT_NEAR(j_apply(spec, z, v).dot(u), bracket.dot(z), 1e-12);
    EXPECT_LT((htype_bracket(spec, u, v) + bracket).norm(), 1e-12);
  }
}

TEST(Clifford, StandardBasisCarriesAlgebraCoordinates) {
  const ModuleSpec spec = make_module(4, 2);
  const CNum z = Vec::LinSpaced(4, 1.0, 4.0);
  const VVec image = j_apply(spec, z, standard_v(spec, 2));
  EXPECT_LT(image.head(4).norm(), 1e-15);
  EXPECT_LT((image.tail(4) - z).norm(), 1e-15);
}
