#include "rankone/clifford.hpp"

#include <array>
#include <cmath>

namespace rankone {
namespace {

using Quat = std::array<double, 4>;

Quat quat_mul(const Quat& p, const Quat& q) {
  return {p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3],
          p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2],
          p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1],
          p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0]};
}

Quat quat_unit(int i) {
  Quat q{0, 0, 0, 0};
  q[static_cast<std::size_t>(i)] = 1.0;
  return q;
}

// Matrix of x -> q x (left) or x -> x q (right) on R^4 = H.
Mat quat_matrix(int unit, bool left) {
  Mat m(4, 4);
  Quat q = quat_unit(unit);
  for (int k = 0; k < 4; ++k) {
    Quat col = left ? quat_mul(q, quat_unit(k)) : quat_mul(quat_unit(k), q);
    for (int r = 0; r < 4; ++r) m(r, k) = col[static_cast<std::size_t>(r)];
  }
  return m;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat block_diag_repeat(const Mat& block, int copies) {
  const auto k = block.rows();
  Mat out = Mat::Zero(k * copies, k * copies);
  for (int c = 0; c < copies; ++c) out.block(c * k, c * k, k, k) = block;
  return out;
}

// Seven anticommuting skew orthogonal 8x8 matrices from the quaternion module:
// R^8 = R^2 (x) H with eps (x) 1, sx (x) L_q and sz (x) R_q.
std::vector<Mat> octave_generators() {
  Mat eps(2, 2), sx(2, 2), sz(2, 2);
  eps << 0, -1, 1, 0;
  sx << 0, 1, 1, 0;
  sz << 1, 0, 0, -1;
  std::vector<Mat> gens{Mat::Identity(8, 8), kron(eps, Mat::Identity(4, 4))};
  for (int q = 1; q <= 3; ++q) gens.push_back(kron(sx, quat_matrix(q, true)));
  for (int q = 1; q <= 3; ++q) gens.push_back(kron(sz, quat_matrix(q, false)));
  // Conjugate so that J_{e_i} e_0 = e_i.
  Mat basis(8, 8);
  for (int i = 0; i < 8; ++i) basis.col(i) = gens[static_cast<std::size_t>(i)].col(0);
  for (auto& g : gens) g = basis.transpose() * g * basis;
  return gens;
}

std::vector<Mat> empty_gens(int d) { return std::vector<Mat>(static_cast<std::size_t>(d), Mat(0, 0)); }

}  // namespace

ModuleSpec make_module(int d, int n) {
  if (d < 1 || n < 0) fail(ErrorCode::invalid_dimensions, "d must be >= 1 and n >= 0");
  ModuleSpec spec;
  spec.d = d;
  spec.n = n;
  spec.vdim = n * d;
  spec.j2_expected = true;
  if (n == 0) {
    spec.gens = empty_gens(d);
    return spec;
  }
  switch (d) {
    case 1:
      spec.gens = {Mat::Identity(n, n)};
      break;
    case 2: {
      Mat rot(2, 2);
      rot << 0, -1, 1, 0;
      spec.gens = {Mat::Identity(2 * n, 2 * n), block_diag_repeat(rot, n)};
      break;
    }
    case 4:
      spec.gens.clear();
      for (int q = 0; q < 4; ++q) spec.gens.push_back(block_diag_repeat(quat_matrix(q, true), n));
      break;
    case 8:
      if (n != 1) fail(ErrorCode::invalid_dimensions, "d = 8 requires n = 1 (non-associative C)");
      spec.gens = octave_generators();
      break;
    default:
      fail(ErrorCode::invalid_dimensions,
           "no J2 C-module with d = " + std::to_string(d) + " and n = " + std::to_string(n));
  }
  validate_module(spec);
  return spec;
}

ModuleSpec make_non_j2_module(NonJ2Kind kind) {
  ModuleSpec spec;
  spec.j2_expected = false;
  spec.n = 1;
  if (kind == NonJ2Kind::d3) {
    spec.d = 3;
    spec.vdim = 4;
    for (int q = 0; q < 3; ++q) spec.gens.push_back(quat_matrix(q, true));
  } else {
    // V1 + V2 with the two inequivalent Cliff(R^3) modules: the volume element
    // acts as -1 on V1 and +1 on V2.
    spec.d = 4;
    spec.n = 2;
    spec.vdim = 8;
    for (int q = 0; q < 4; ++q) {
      Mat g = Mat::Zero(8, 8);
      Mat l = quat_matrix(q, true);
      g.block(0, 0, 4, 4) = l;
      g.block(4, 4, 4, 4) = q == 3 ? Mat(-l) : l;
      spec.gens.push_back(g);
    }
  }
  validate_module(spec);
  return spec;
}

void validate_module(const ModuleSpec& spec, double tolerance) {
  if (static_cast<int>(spec.gens.size()) != spec.d)
    fail(ErrorCode::validation, "expected d generator matrices");
  for (const auto& g : spec.gens)
    if (g.rows() != spec.vdim || g.cols() != spec.vdim)
      fail(ErrorCode::validation, "generator size does not match dim V");
  if (spec.vdim == 0) return;
  const Mat id = Mat::Identity(spec.vdim, spec.vdim);
  if ((spec.gens[0] - id).norm() > tolerance) fail(ErrorCode::validation, "gens[0] is not the identity");
  for (int i = 1; i < spec.d; ++i) {
    const Mat& gi = spec.gens[static_cast<std::size_t>(i)];
    if ((gi + gi.transpose()).norm() > tolerance) fail(ErrorCode::validation, "generator not skew");
    if ((gi.transpose() * gi - id).norm() > tolerance) fail(ErrorCode::validation, "generator not orthogonal");
    for (int j = i; j < spec.d; ++j) {
      const Mat& gj = spec.gens[static_cast<std::size_t>(j)];
      Mat ac = gi * gj + gj * gi;
      if (i == j) ac += 2.0 * id;
      if (ac.norm() > tolerance) fail(ErrorCode::validation, "Clifford relation violated");
    }
  }
}

CNum unit_element(int d) { return basis_element(d, 0); }

CNum basis_element(int d, int i) {
  CNum e = CNum::Zero(d);
  e(i) = 1.0;
  return e;
}

CNum conj(const CNum& zeta) {
  CNum out = -zeta;
  out(0) = zeta(0);
  return out;
}

CNum c_inverse(const CNum& zeta) {
  const double n2 = zeta.squaredNorm();
  if (std::sqrt(n2) <= tol::identity) fail(ErrorCode::zero_divisor, "inverse of a zero element of C");
  return conj(zeta) / n2;
}

double re(const CNum& zeta) { return zeta(0); }

Mat j_matrix(const ModuleSpec& spec, const CNum& zeta) {
  if (zeta.size() != spec.d) fail(ErrorCode::dimension_mismatch, "element of C has wrong length");
  Mat out = Mat::Zero(spec.vdim, spec.vdim);
  for (int i = 0; i < spec.d; ++i) out += zeta(i) * spec.gens[static_cast<std::size_t>(i)];
  return out;
}

VVec j_apply(const ModuleSpec& spec, const CNum& zeta, const VVec& v) {
  if (zeta.size() != spec.d || v.size() != spec.vdim)
    fail(ErrorCode::dimension_mismatch, "j_apply argument sizes");
  VVec out = VVec::Zero(spec.vdim);
  for (int i = 0; i < spec.d; ++i)
    if (zeta(i) != 0.0) out += zeta(i) * (spec.gens[static_cast<std::size_t>(i)] * v);
  return out;
}

CNum mult_v(const ModuleSpec& spec, const CNum& zeta, const CNum& eta, const VVec& v) {
  const double vn = v.norm();
  if (vn == 0.0) fail(ErrorCode::zero_vector, "mult_v needs v != 0");
  const VVec x = j_apply(spec, zeta, j_apply(spec, eta, v));
  CNum lambda(spec.d);
  VVec fit = VVec::Zero(spec.vdim);
  for (int i = 0; i < spec.d; ++i) {
    const VVec gv = spec.gens[static_cast<std::size_t>(i)] * v;
    lambda(i) = x.dot(gv) / (vn * vn);
    fit += lambda(i) * gv;
  }
  const double residual = (x - fit).norm();
  if (residual > 1e-9 * zeta.norm() * eta.norm() * vn)
    fail(ErrorCode::j2_residual, "J_zeta J_eta v is not in Cv (residual " + std::to_string(residual) + ")");
  return lambda;
}

CNum divide(const ModuleSpec& spec, const CNum& zeta, const CNum& eta, const VVec& v, Side side) {
  if (eta.norm() <= tol::identity) fail(ErrorCode::zero_divisor, "division by zero element");
  if (v.norm() == 0.0) fail(ErrorCode::zero_vector, "divide needs v != 0");
  CNum xi;
  if (side == Side::left) {
    Mat a(spec.d, spec.d);
    for (int k = 0; k < spec.d; ++k) a.col(k) = mult_v(spec, basis_element(spec.d, k), eta, v);
    Eigen::FullPivLU<Mat> lu(a);
    if (lu.rank() < spec.d) fail(ErrorCode::singular_system, "left division system is singular");
    xi = lu.solve(zeta);
    if ((mult_v(spec, xi, eta, v) - zeta).norm() > tol::solve * std::max(1.0, zeta.norm()))
      fail(ErrorCode::singular_system, "left division back-substitution failed");
  } else {
    xi = mult_v(spec, conj(eta) / eta.squaredNorm(), zeta, v);
    if ((mult_v(spec, eta, xi, v) - zeta).norm() > tol::solve * std::max(1.0, zeta.norm()))
      fail(ErrorCode::singular_system, "right division back-substitution failed");
  }
  return xi;
}

CNum apply_complex(const CNum& zeta, const std::function<std::complex<double>(std::complex<double>)>& f) {
  const double a = zeta(0);
  CNum imag = zeta;
  imag(0) = 0.0;
  const double b = imag.norm();
  const std::complex<double> value = f({a, b});
  CNum out = CNum::Zero(zeta.size());
  out(0) = value.real();
  if (b > 0.0) out += (value.imag() / b) * imag;
  return out;
}

double CompositionReport::max_violation() const {
  return std::max({unit_action, norm_product, polarized, conj_inverse, anticommutation, skew_orthogonal});
}

CompositionReport verify_composition(const ModuleSpec& spec, int sample_count, std::uint64_t seed) {
  CompositionReport report;
  if (spec.vdim == 0) return report;
  const Mat id = Mat::Identity(spec.vdim, spec.vdim);
  for (int i = 1; i < spec.d; ++i) {
    const Mat& gi = spec.gens[static_cast<std::size_t>(i)];
    report.skew_orthogonal = std::max({report.skew_orthogonal, (gi + gi.transpose()).cwiseAbs().maxCoeff(),
                                       (gi.transpose() * gi - id).cwiseAbs().maxCoeff()});
    for (int j = 1; j < spec.d; ++j) {
      Mat ac = gi * spec.gens[static_cast<std::size_t>(j)] + spec.gens[static_cast<std::size_t>(j)] * gi;
      if (i == j) ac += 2.0 * id;
      report.anticommutation = std::max(report.anticommutation, ac.cwiseAbs().maxCoeff());
    }
  }
  Rng rng(seed);
  const CNum one = unit_element(spec.d);
  for (int s = 0; s < sample_count; ++s) {
    const CNum zeta = rng.unit(spec.d);
    const CNum eta = rng.unit(spec.d);
    const VVec u = rng.unit(spec.vdim);
    const VVec v = rng.unit(spec.vdim);
    report.unit_action = std::max(report.unit_action, (j_apply(spec, one, v) - v).norm());
    report.norm_product =
        std::max(report.norm_product, std::abs(j_apply(spec, zeta, v).norm() - zeta.norm() * v.norm()));
    const double lhs = j_apply(spec, zeta, u).dot(j_apply(spec, eta, v)) +
                       j_apply(spec, eta, u).dot(j_apply(spec, zeta, v));
    report.polarized = std::max(report.polarized, std::abs(lhs - 2.0 * zeta.dot(eta) * u.dot(v)));
    report.conj_inverse = std::max(
        report.conj_inverse, (j_apply(spec, conj(zeta), j_apply(spec, zeta, v)) - zeta.squaredNorm() * v).norm());
  }
  return report;
}

double j2_residual(const ModuleSpec& spec, int sample_count, std::uint64_t seed) {
  if (spec.vdim == 0) return 0.0;
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < sample_count; ++s) {
    const VVec v = rng.unit(spec.vdim);
    Mat frame(spec.vdim, spec.d);
    for (int k = 0; k < spec.d; ++k) frame.col(k) = spec.gens[static_cast<std::size_t>(k)] * v;
    for (int i = 1; i < spec.d; ++i) {
      for (int j = i + 1; j < spec.d; ++j) {
        const VVec x = spec.gens[static_cast<std::size_t>(i)] * (spec.gens[static_cast<std::size_t>(j)] * v);
        worst = std::max(worst, (x - frame * (frame.transpose() * x)).norm());
      }
    }
  }
  return worst;
}

bool verify_j2(const ModuleSpec& spec, int sample_count, std::uint64_t seed) {
  return j2_residual(spec, sample_count, seed) < 1e-9;
}

AssociativityReport is_associative(const ModuleSpec& spec, int sample_count, std::uint64_t seed) {
  if (!spec.j2_expected) fail(ErrorCode::validation, "is_associative needs a J2 module");
  AssociativityReport report;
  report.associative = spec.d <= 4;
  if (spec.vdim == 0) return report;
  Rng rng(seed);
  double widest = 0.0;
  for (int s = 0; s < sample_count; ++s) {
    const CNum zeta = rng.unit(spec.d);
    const CNum eta = rng.unit(spec.d);
    const VVec v = rng.unit(spec.vdim);
    const VVec v2 = rng.unit(spec.vdim);
    const double gap = (mult_v(spec, zeta, eta, v) - mult_v(spec, zeta, eta, v2)).norm();
    if (gap > widest) {
      widest = gap;
      report.witness_zeta = zeta;
      report.witness_eta = eta;
      report.witness_v = v;
      report.witness_v2 = v2;
    }
  }
  report.max_variation = widest;
  if (report.associative) {
    report.cross_check_passed = widest < 1e-10;
  } else {
    report.witness_gap = widest;
    report.cross_check_passed = widest > 0.1;
  }
  return report;
}

CNum htype_bracket(const ModuleSpec& spec, const VVec& v, const VVec& u) {
  if (v.size() != spec.vdim || u.size() != spec.vdim) fail(ErrorCode::dimension_mismatch, "bracket sizes");
  CNum out = CNum::Zero(spec.d);
  for (int i = 1; i < spec.d; ++i) out(i) = (spec.gens[static_cast<std::size_t>(i)] * v).dot(u);
  return out;
}

VVec standard_v(const ModuleSpec& spec, int j) {
  if (j < 1 || j > spec.n) fail(ErrorCode::domain, "standard_v index out of range");
  VVec u = VVec::Zero(spec.vdim);
  u((j - 1) * spec.d) = 1.0;
  return u;
}

}  // namespace rankone
