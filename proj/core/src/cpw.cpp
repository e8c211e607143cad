#include "rankone/cpw.hpp"

#include <cmath>

namespace rankone {
namespace {

constexpr double kCFactorThreshold = 1e-10;

// Singular value of the C-block of a line frame; zero iff the line lies in V.
double c_factor(const ModuleSpec& spec, const CLine& line) {
  return line.frame().leftCols(spec.d).norm() / std::sqrt(static_cast<double>(spec.d));
}

}  // namespace

const WVec& CPWPoint::w() const {
  if (!is_finite()) fail(ErrorCode::domain, "point is at infinity");
  return std::get<WVec>(value_);
}

const CLine& CPWPoint::line() const {
  if (is_finite()) fail(ErrorCode::domain, "point is finite");
  return std::get<CLine>(value_);
}

bool points_equal(const ModuleSpec& spec, const CPWPoint& p, const CPWPoint& q, double tolerance) {
  (void)spec;
  if (p.is_finite() != q.is_finite()) return false;
  if (p.is_finite()) return (p.w() - q.w()).norm() <= tolerance * std::max(1.0, p.w().norm());
  return lines_equal(p.line(), q.line(), tolerance);
}

InfinityForm infinity_form(const ModuleSpec& spec, const CLine& line) {
  InfinityForm out;
  const Mat& f = line.frame();
  if (c_factor(spec, line) > kCFactorThreshold) {
    // Coefficients c with sum c_i (C-part of row i) = 1.
    const Mat fc = f.leftCols(spec.d).transpose();
    const Vec c = fc.fullPivLu().solve(unit_element(spec.d));
    out.v = f.rightCols(spec.vdim).transpose() * c;
  } else {
    out.in_v = true;
    out.v = f.row(0).tail(spec.vdim).transpose();
  }
  return out;
}

CPWPoint infinity_of(const ModuleSpec& spec, const WVec& w) { return CPWPoint::infinity(cline_through(spec, w)); }

CPWPoint phi0(const ModuleSpec& spec, const CPWPoint& p) {
  if (p.is_finite()) {
    const CNum zeta = zeta_part(spec, p.w());
    const VVec v = v_part(spec, p.w());
    if (zeta.norm() > tol::branch) {
      const CNum inv = c_inverse(zeta);
      return CPWPoint::finite(join(inv, spec.vdim > 0 ? j_apply(spec, inv, v) : VVec()));
    }
    return infinity_of(spec, join(unit_element(spec.d), v));
  }
  const InfinityForm form = infinity_form(spec, p.line());
  if (form.in_v) return p;
  return CPWPoint::finite(join(CNum::Zero(spec.d), form.v));
}

Mat psi_matrix(const ModuleSpec& spec, int j) {
  if (j < 1 || j > spec.n) fail(ErrorCode::domain, "psi_j needs 1 <= j <= n");
  Mat p = Mat::Identity(spec.dim_w(), spec.dim_w());
  const int d = spec.d;
  p.block(0, 0, d, d).setZero();
  p.block(j * d, j * d, d, d).setZero();
  p.block(0, j * d, d, d).setIdentity();
  p.block(j * d, 0, d, d).setIdentity();
  return p;
}

CPWPoint phi_j(const ModuleSpec& spec, int j, const CPWPoint& p) {
  if (j == 0) return phi0(spec, p);
  if (j == spec.n + 1) return p;
  const Mat psi = psi_matrix(spec, j);
  const CPWPoint q = phi0(spec, p);
  const CPWPoint r = q.is_finite() ? CPWPoint::finite(psi * q.w()) : CPWPoint::infinity(map_line(psi, q.line()));
  return phi0(spec, r);
}

int chart_cover_index(const ModuleSpec& spec, const CPWPoint& p) {
  if (p.is_finite()) return spec.n + 1;
  if (c_factor(spec, p.line()) > kCFactorThreshold) return 0;
  const Mat& f = p.line().frame();
  for (int j = 1; j <= spec.n; ++j)
    if (f.middleCols(j * spec.d, spec.d).norm() > kCFactorThreshold) return j;
  fail(ErrorCode::validation, "line at infinity meets no chart");
}

CPWPoint hopf(const ModuleSpec& spec, const WVec& w) {
  if (std::abs(w.norm() - 1.0) > 1e-10) fail(ErrorCode::non_unit, "hopf needs a unit vector");
  return infinity_of(spec, w);
}

bool AffineClosure::contains(const ModuleSpec& spec, const CPWPoint& p, double tolerance) const {
  const Mat outside = Mat::Identity(spec.dim_w(), spec.dim_w()) - basis * basis.transpose();
  if (p.is_finite()) return (outside * (p.w() - offset)).norm() <= tolerance * std::max(1.0, p.w().norm());
  return (outside * p.line().frame().transpose()).norm() <= tolerance;
}

AffineClosure closure_of_affine(const ModuleSpec& spec, const WVec& w0, const Mat& e_columns) {
  AffineClosure out;
  out.offset = w0;
  out.cbasis = onb_cbasis(spec, e_columns);
  out.basis = Mat(spec.dim_w(), 0);
  for (const auto& w : out.cbasis) {
    const Mat f = cline_through(spec, w).frame();
    Mat grown(spec.dim_w(), out.basis.cols() + f.rows());
    grown << out.basis, f.transpose();
    out.basis = grown;
  }
  return out;
}

AffineClosure closure_of_affine(const ModuleSpec& spec, const WVec& w0, const CSubspace& e) {
  return closure_of_affine(spec, w0, e.basis());
}

CPWPoint random_point(const ModuleSpec& spec, Rng& rng, double infinity_fraction) {
  if (rng.uniform(0.0, 1.0) < infinity_fraction) return infinity_of(spec, rng.unit(spec.dim_w()));
  return CPWPoint::finite(rng.gaussian(spec.dim_w()));
}

}  // namespace rankone
