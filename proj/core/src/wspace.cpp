#include "rankone/wspace.hpp"

#include <cmath>
#include <numbers>

namespace rankone {
namespace {

void require_unit(const Vec& x, const char* what) {
  if (std::abs(x.norm() - 1.0) > 1e-10) fail(ErrorCode::non_unit, std::string(what) + " must have unit norm");
}

void require_imaginary_unit(const CNum& z) {
  require_unit(z, "element of C'");
  if (std::abs(z(0)) > 1e-10) fail(ErrorCode::non_unit, "element must lie in C' (zero real part)");
}

Mat block_diag(const Mat& c_block, const Mat& v_block) {
  Mat out = Mat::Zero(c_block.rows() + v_block.rows(), c_block.cols() + v_block.cols());
  out.topLeftCorner(c_block.rows(), c_block.cols()) = c_block;
  out.bottomRightCorner(v_block.rows(), v_block.cols()) = v_block;
  return out;
}

// Reflection of C in the plane R1 + Rz: eta -> z eta z^{-1}.
Mat c_reflection(int d, const CNum& z) {
  Mat r = -Mat::Identity(d, d);
  r(0, 0) = 1.0;
  return r + 2.0 * z * z.transpose();
}

// Greedy orthonormal C-basis: repeatedly take the candidate with the largest
// component orthogonal to the lines chosen so far.
std::vector<WVec> greedy_cbasis(const ModuleSpec& spec, const Mat& candidates, Eigen::Index target_dim) {
  std::vector<WVec> out;
  Mat chosen(spec.dim_w(), 0);
  while (chosen.cols() < target_dim) {
    Eigen::Index best = -1;
    double best_norm = 0.0;
    WVec best_vec;
    for (Eigen::Index c = 0; c < candidates.cols(); ++c) {
      WVec r = candidates.col(c) - chosen * (chosen.transpose() * candidates.col(c));
      if (r.norm() > best_norm + 1e-12) {
        best_norm = r.norm();
        best = c;
        best_vec = r;
      }
    }
    if (best < 0 || best_norm < 1e-8) fail(ErrorCode::not_c_closed, "subspace dimension is not a sum of C-lines");
    const WVec w = best_vec / best_norm;
    out.push_back(w);
    const Mat frame = cline_through(spec, w).frame();
    Mat grown(spec.dim_w(), chosen.cols() + frame.rows());
    grown << chosen, frame.transpose();
    chosen = grown;
  }
  return out;
}

// Orthonormal C-basis of V whose first element is v (unit).
std::vector<VVec> cbasis_of_v_from(const ModuleSpec& spec, const VVec& v) {
  Mat candidates(spec.dim_w(), 1 + spec.vdim);
  candidates.col(0) = join(CNum::Zero(spec.d), v);
  for (int i = 0; i < spec.vdim; ++i) candidates.col(1 + i) = join(CNum::Zero(spec.d), VVec::Unit(spec.vdim, i));
  std::vector<VVec> out;
  for (const auto& w : greedy_cbasis(spec, candidates, spec.vdim)) out.push_back(v_part(spec, w));
  return out;
}

// M_1 element mapping an orthonormal C-basis of V onto another (associative C).
Mat basis_remap(const ModuleSpec& spec, const std::vector<VVec>& from, const std::vector<VVec>& to) {
  Mat psi = Mat::Zero(spec.vdim, spec.vdim);
  for (std::size_t j = 0; j < from.size(); ++j)
    for (int i = 0; i < spec.d; ++i)
      psi += (spec.gens[static_cast<std::size_t>(i)] * to[j]) *
             (spec.gens[static_cast<std::size_t>(i)] * from[j]).transpose();
  return psi;
}

}  // namespace

CNum zeta_part(const ModuleSpec& spec, const WVec& w) {
  if (w.size() != spec.dim_w()) fail(ErrorCode::dimension_mismatch, "point of W has wrong length");
  return w.head(spec.d);
}

VVec v_part(const ModuleSpec& spec, const WVec& w) {
  if (w.size() != spec.dim_w()) fail(ErrorCode::dimension_mismatch, "point of W has wrong length");
  return w.tail(spec.vdim);
}

WVec join(const CNum& zeta, const VVec& v) {
  WVec w(zeta.size() + v.size());
  w << zeta, v;
  return w;
}

WVec standard_w(const ModuleSpec& spec, int j) {
  if (j == 0) return join(unit_element(spec.d), VVec::Zero(spec.vdim));
  return join(CNum::Zero(spec.d), standard_v(spec, j));
}

CLine::CLine(Mat frame) : frame_(std::move(frame)) {}

double projector_distance(const Mat& p, const Mat& q) { return (p - q).norm(); }

bool lines_equal(const CLine& a, const CLine& b, double tolerance) {
  return a.dim_w() == b.dim_w() && projector_distance(a.projector(), b.projector()) <= tolerance;
}

CLine cline_through(const ModuleSpec& spec, const WVec& w) {
  const double wn = w.norm();
  if (wn == 0.0) fail(ErrorCode::zero_vector, "C-line through the origin needs w != 0");
  const CNum zeta = zeta_part(spec, w);
  const VVec v = v_part(spec, w);
  Mat frame(spec.d, spec.dim_w());
  if (zeta.norm() > 1e-12 * wn) {
    const VVec mu = spec.vdim > 0 ? j_apply(spec, c_inverse(zeta), v) : VVec();
    const double scale = 1.0 / std::sqrt(1.0 + mu.squaredNorm());
    for (int i = 0; i < spec.d; ++i) {
      const VVec vi = spec.vdim > 0 ? VVec(spec.gens[static_cast<std::size_t>(i)] * mu) : VVec();
      frame.row(i) = scale * join(basis_element(spec.d, i), vi).transpose();
    }
  } else {
    const VVec vhat = v / v.norm();
    for (int i = 0; i < spec.d; ++i)
      frame.row(i) = join(CNum::Zero(spec.d), spec.gens[static_cast<std::size_t>(i)] * vhat).transpose();
  }
  return CLine(std::move(frame));
}

CLine cline_from_span(const Mat& columns) {
  const Mat q = orthonormal_span(columns);
  if (q.cols() != columns.cols()) fail(ErrorCode::numerical_degeneracy, "image of a C-line lost rank");
  return CLine(q.transpose());
}

double cline_angle(const ModuleSpec& spec, const WVec& w, const WVec& w2) {
  const Mat p = cline_through(spec, w).projector();
  const Mat f2 = cline_through(spec, w2).frame();
  const double ratio = (p * w2).norm() / w2.norm();
  Rng rng(kDefaultSeed);
  for (int s = 0; s < 7; ++s) {
    const WVec sample = f2.transpose() * rng.gaussian(spec.d);
    const double r = (p * sample).norm() / sample.norm();
    if (std::abs(r - ratio) > 1e-10) fail(ErrorCode::constancy_violation, "projection ratio is not constant on the line");
  }
  return std::acos(std::min(1.0, ratio));
}

Mat CSubspace::basis() const {
  if (lines.empty()) return Mat(0, 0);
  const Eigen::Index dim = lines.front().dim_w();
  Mat out(dim, 0);
  for (const auto& line : lines) {
    Mat grown(dim, out.cols() + line.frame().rows());
    grown << out, line.frame().transpose();
    out = grown;
  }
  return out;
}

std::vector<WVec> onb_cbasis(const ModuleSpec& spec, const Mat& subspace_columns) {
  if (subspace_columns.rows() != spec.dim_w()) fail(ErrorCode::dimension_mismatch, "subspace columns");
  Mat q = subspace_columns;
  const Mat gram = q.transpose() * q;
  if ((gram - Mat::Identity(q.cols(), q.cols())).norm() > 1e-12) q = orthonormal_span(subspace_columns);
  if (q.cols() % spec.d != 0) fail(ErrorCode::not_c_closed, "dimension is not a multiple of d");
  const Mat outside = Mat::Identity(spec.dim_w(), spec.dim_w()) - q * q.transpose();
  for (Eigen::Index c = 0; c < q.cols(); ++c) {
    const Mat frame = cline_through(spec, q.col(c)).frame();
    if ((outside * frame.transpose()).norm() > tol::line) fail(ErrorCode::not_c_closed, "subspace is not C-closed");
  }
  return greedy_cbasis(spec, q, q.cols());
}

std::vector<WVec> onb_cbasis(const ModuleSpec& spec, const CSubspace& subspace) {
  return onb_cbasis(spec, subspace.basis());
}

std::vector<WVec> onb_cbasis(const ModuleSpec& spec) {
  return onb_cbasis(spec, Mat::Identity(spec.dim_w(), spec.dim_w()));
}

KMatrix sigma_rot(const ModuleSpec& spec, const VVec& v0, double theta) {
  if (spec.vdim == 0) fail(ErrorCode::domain, "sigma_rot needs V != 0");
  require_unit(v0, "v0");
  const double c = std::cos(theta), s = std::sin(theta);
  Mat out(spec.dim_w(), spec.dim_w());
  Mat frame(spec.vdim, spec.d);
  for (int i = 0; i < spec.d; ++i) frame.col(i) = spec.gens[static_cast<std::size_t>(i)] * v0;
  for (int k = 0; k < spec.dim_w(); ++k) {
    const WVec e = WVec::Unit(spec.dim_w(), k);
    const CNum zeta = zeta_part(spec, e);
    const VVec v = v_part(spec, e);
    const CNum eta = frame.transpose() * v;
    const VVec rest = v - frame * eta;
    out.col(k) = join(c * zeta - s * eta, j_apply(spec, c * eta + s * zeta, v0) + rest);
  }
  return out;
}

KMatrix m_alpha(const ModuleSpec& spec, const std::vector<CNum>& word) {
  Mat phi = Mat::Identity(spec.d, spec.d);
  Mat psi = Mat::Identity(spec.vdim, spec.vdim);
  for (const auto& z : word) {
    require_imaginary_unit(z);
    phi = phi * c_reflection(spec.d, z);
    if (spec.vdim > 0) psi = psi * j_matrix(spec, z);
  }
  return block_diag(phi, psi);
}

KMatrix k_to_point(const ModuleSpec& spec, const WVec& w) {
  require_unit(w, "target point");
  const int dim = spec.dim_w();
  const WVec e0 = standard_w(spec, 0);
  KMatrix k;
  if (spec.vdim == 0) {
    const WVec u = e0 - w;
    k = Mat::Identity(dim, dim);
    if (u.norm() > 1e-14) k -= 2.0 * u * u.transpose() / u.squaredNorm();
  } else {
    const CNum zeta = zeta_part(spec, w);
    const VVec v = v_part(spec, w);
    const double a = zeta.norm(), b = v.norm();
    const double theta = std::atan2(b, a);
    const CNum zeta_dir = a > 1e-15 ? CNum(zeta / a) : unit_element(spec.d);
    const VVec v_dir = b > 1e-15 ? VVec(v / b) : standard_v(spec, 1);
    const VVec pivot = j_apply(spec, c_inverse(zeta_dir), v_dir);
    k = sigma_rot(spec, pivot, theta - std::numbers::pi / 2) * sigma_rot(spec, v_dir, std::numbers::pi / 2);
  }
  if ((k * e0 - w).norm() > 1e-10) fail(ErrorCode::k_construction, "k_to_point missed its target");
  return k;
}

KMatrix rho_t(const ModuleSpec& spec, const CNum& z, double t) {
  if (spec.vdim == 0 || spec.d < 2 || spec.d > 4) fail(ErrorCode::domain, "rho_t needs associative C with C' != 0 and V != 0");
  require_imaginary_unit(z);
  const CNum eta = std::cos(t) * unit_element(spec.d) + std::sin(t) * z;
  const CNum eta_inv = c_inverse(eta);
  const VVec u1 = standard_v(spec, 1);
  Mat phi(spec.d, spec.d);
  for (int i = 0; i < spec.d; ++i)
    phi.col(i) = mult_v(spec, mult_v(spec, eta, basis_element(spec.d, i), u1), eta_inv, u1);
  const Mat m = block_diag(phi, j_matrix(spec, eta));
  const Mat sigma1 = sigma_rot(spec, u1, std::numbers::pi / 2);
  return sigma1.transpose() * m * sigma1;
}

KMatrix m_transport(const ModuleSpec& spec, const CNum& z, const VVec& v, const CNum& z2, const VVec& v2) {
  if (spec.vdim == 0) fail(ErrorCode::domain, "m_transport needs V != 0");
  require_unit(v, "v");
  require_unit(v2, "v2");
  if (spec.d >= 2) {
    require_imaginary_unit(z);
    require_imaginary_unit(z2);
  }
  // Step 1: move z to z2 by an element acting on C' as a rotation.
  Mat m1 = Mat::Identity(spec.dim_w(), spec.dim_w());
  if (spec.d == 2) {
    if ((z - z2).norm() > 1e-8) {
      // Pin(C') is trivial on C' here; complex conjugation in C-coordinates is in M.
      Mat conj_c = Mat::Identity(2, 2);
      conj_c(1, 1) = -1.0;
      Mat conj_v = Mat::Identity(spec.vdim, spec.vdim);
      for (int j = 0; j < spec.n; ++j) conj_v(2 * j + 1, 2 * j + 1) = -1.0;
      m1 = block_diag(conj_c, conj_v);
    }
  } else if (spec.d > 2) {
    CNum mid = z + z2;
    if (mid.norm() < 1e-8) {
      Mat basis(spec.d, 2);
      basis << unit_element(spec.d), z;
      mid = orthogonal_complement(basis, spec.d).col(0);
    }
    m1 = m_alpha(spec, {mid / mid.norm(), z});
  }
  const VVec v1 = v_part(spec, m1 * join(CNum::Zero(spec.d), v));

  // Step 2: move v1 to v2 while fixing z2.
  Mat m2;
  if (spec.d <= 4) {
    const Mat psi = basis_remap(spec, cbasis_of_v_from(spec, v1), cbasis_of_v_from(spec, v2));
    m2 = block_diag(Mat::Identity(spec.d, spec.d), psi);
  } else {
    Mat constraints(spec.vdim, 4);
    constraints << v1, v2, j_apply(spec, z2, v1), j_apply(spec, z2, v2);
    const VVec pivot = orthogonal_complement(orthonormal_span(constraints), spec.vdim).col(0);
    CNum z_from(spec.d), z_to(spec.d);
    for (int i = 0; i < spec.d; ++i) {
      const VVec gi = spec.gens[static_cast<std::size_t>(i)] * pivot;
      z_from(i) = v1.dot(gi);
      z_to(i) = v2.dot(gi);
    }
    // beta = -z_to z_from
    m2 = m_alpha(spec, {z_to, z_from});
    m2.bottomRightCorner(spec.vdim, spec.vdim) *= -1.0;
  }
  const Mat m = m2 * m1;
  const WVec got = m * join(spec.d >= 2 ? z : CNum::Zero(spec.d), v);
  const WVec want = join(spec.d >= 2 ? z2 : CNum::Zero(spec.d), v2);
  if ((got - want).norm() > tol::solve) fail(ErrorCode::k_construction, "m_transport missed its target");
  return m;
}

KMatrix k_from_frame(const ModuleSpec& spec, const std::vector<WVec>& frame) {
  if (static_cast<int>(frame.size()) != spec.n + 1) fail(ErrorCode::dimension_mismatch, "frame must have n+1 vectors");
  const KMatrix k1 = k_to_point(spec, frame[0]);
  KMatrix k = k1;
  if (spec.n >= 1) {
    std::vector<VVec> targets;
    for (int j = 1; j <= spec.n; ++j) {
      const WVec g = k1.transpose() * frame[static_cast<std::size_t>(j)];
      if (zeta_part(spec, g).norm() > tol::line) fail(ErrorCode::k_construction, "frame is not C-orthogonal");
      targets.push_back(v_part(spec, g));
    }
    Mat m;
    if (spec.d <= 4) {
      std::vector<VVec> standard;
      for (int j = 1; j <= spec.n; ++j) standard.push_back(standard_v(spec, j));
      m = block_diag(Mat::Identity(spec.d, spec.d), basis_remap(spec, standard, targets));
    } else {
      const CNum z = basis_element(spec.d, 1);
      m = m_transport(spec, z, standard_v(spec, 1), z, targets[0]);
    }
    k = k1 * m;
  }
  for (int j = 0; j <= spec.n; ++j)
    if ((k * standard_w(spec, j) - frame[static_cast<std::size_t>(j)]).norm() > tol::solve)
      fail(ErrorCode::k_construction, "assembled k does not map the standard frame");
  if (!is_k_member(spec, k)) fail(ErrorCode::k_construction, "assembled k is not in K");
  return k;
}

KMatrix random_k(const ModuleSpec& spec, Rng& rng) {
  const int dim = spec.dim_w();
  if (spec.vdim == 0) {
    Eigen::HouseholderQR<Mat> qr(Mat::NullaryExpr(dim, dim, [&]() { return rng.normal(); }));
    return qr.householderQ() * Mat::Identity(dim, dim);
  }
  KMatrix k = k_to_point(spec, rng.unit(dim));
  auto random_imaginary = [&]() {
    CNum z = rng.gaussian(spec.d);
    z(0) = 0.0;
    return CNum(z / z.norm());
  };
  const CNum z = spec.d >= 2 ? random_imaginary() : CNum::Zero(1);
  const CNum z2 = spec.d >= 2 ? random_imaginary() : CNum::Zero(1);
  k = k * m_transport(spec, z, rng.unit(spec.vdim), z2, rng.unit(spec.vdim));
  k = k * sigma_rot(spec, rng.unit(spec.vdim), rng.uniform(-std::numbers::pi, std::numbers::pi));
  return k;
}

CLine map_line(const Mat& g, const CLine& line) { return cline_from_span(g * line.frame().transpose()); }

double line_preservation_residual(const ModuleSpec& spec, const Mat& g, int samples, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const WVec w = rng.unit(spec.dim_w());
    const Mat image = g * cline_through(spec, w).frame().transpose();
    const Mat q = orthonormal_span(image);
    if (q.cols() != spec.d) return std::numeric_limits<double>::infinity();
    const double r = projector_distance(q * q.transpose(), cline_through(spec, g * w).projector());
    worst = std::max(worst, r);
  }
  return worst;
}

bool is_k_member(const ModuleSpec& spec, const Mat& mat, int samples, std::uint64_t seed) {
  if (mat.rows() != spec.dim_w() || mat.cols() != spec.dim_w()) return false;
  const double orth = (mat.transpose() * mat - Mat::Identity(spec.dim_w(), spec.dim_w())).cwiseAbs().maxCoeff();
  if (orth > tol::orthogonal) return false;
  return line_preservation_residual(spec, mat, samples, seed) <= tol::line;
}

}  // namespace rankone
