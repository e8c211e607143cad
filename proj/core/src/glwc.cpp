#include "rankone/glwc.hpp"

#include <cmath>

namespace rankone {
namespace {

Mat block(const ModuleSpec& spec, const Mat& m, int j, int k) { return m.block(j * spec.d, k * spec.d, spec.d, spec.d); }

void require_decomposable(const ModuleSpec& spec, const Mat& g) {
  if (spec.n == 0) fail(ErrorCode::domain, "decompositions of GL(W,C) need V != 0");
  if (!spec.j2_expected) fail(ErrorCode::domain, "decompositions need a J2 module");
  if (!is_glwc(spec, g)) fail(ErrorCode::not_glwc, "matrix does not preserve C-lines");
}

bool near_k(const ModuleSpec& spec, const Mat& k) {
  const double orth = (k.transpose() * k - Mat::Identity(k.rows(), k.cols())).cwiseAbs().maxCoeff();
  return orth <= tol::solve && line_preservation_residual(spec, k, 16, kDefaultSeed) <= tol::line;
}

}  // namespace

LambdaMatrix::LambdaMatrix(int size, int d)
    : size_(size), d_(d), entries_(static_cast<std::size_t>(size * size), CNum::Zero(d)) {}

const CNum& LambdaMatrix::at(int j, int k) const {
  if (k >= j || j >= size_ || k < 0) fail(ErrorCode::domain, "Lambda entries are strictly lower triangular");
  return entries_[static_cast<std::size_t>(j * size_ + k)];
}

CNum& LambdaMatrix::at(int j, int k) {
  if (k >= j || j >= size_ || k < 0) fail(ErrorCode::domain, "Lambda entries are strictly lower triangular");
  return entries_[static_cast<std::size_t>(j * size_ + k)];
}

double LambdaMatrix::max_abs_diff(const LambdaMatrix& other) const {
  double worst = 0.0;
  for (int j = 0; j < size_; ++j)
    for (int k = 0; k < j; ++k) worst = std::max(worst, (at(j, k) - other.at(j, k)).cwiseAbs().maxCoeff());
  return worst;
}

Mat ADiag::matrix(const ModuleSpec& spec) const {
  Vec diag(spec.dim_w());
  for (int j = 0; j <= spec.n; ++j) diag.segment(j * spec.d, spec.d).setConstant(t(j));
  return diag.asDiagonal();
}

bool is_glwc(const ModuleSpec& spec, const Mat& mat, int samples, std::uint64_t seed) {
  if (mat.rows() != spec.dim_w() || mat.cols() != spec.dim_w()) return false;
  Eigen::JacobiSVD<Mat> svd(mat);
  const Vec& s = svd.singularValues();
  if (s(s.size() - 1) == 0.0 || s(0) / s(s.size() - 1) >= 1e12) fail(ErrorCode::singular_system, "matrix is numerically singular");
  return line_preservation_residual(spec, mat, samples, seed) <= tol::line &&
         line_preservation_residual(spec, mat.transpose(), samples, seed + 1) <= tol::line;
}

TripleForm triple_form(const ModuleSpec& spec, const Mat& h) {
  const int d = spec.d, nv = spec.vdim;
  const double scale = op_norm(h);
  if (nv > 0 && h.topRightCorner(d, nv).norm() > 1e-10 * scale) fail(ErrorCode::v_not_preserved, "h does not preserve V");
  TripleForm out;
  out.alpha = h.topLeftCorner(d, d);
  out.phi = h.bottomRightCorner(nv, nv);
  const CNum alpha_one = out.alpha.col(0);
  const double a1 = alpha_one.norm();
  if (a1 <= tol::identity) fail(ErrorCode::validation, "alpha(1) vanishes");
  const Mat ortho = out.alpha / a1;
  if ((ortho.transpose() * ortho - Mat::Identity(d, d)).cwiseAbs().maxCoeff() > tol::solve)
    fail(ErrorCode::validation, "alpha is not a scalar times an orthogonal map");
  if (nv == 0) {
    out.v0 = VVec();
    return out;
  }
  const Mat sigma = h.bottomLeftCorner(nv, d);
  out.v0 = j_apply(spec, c_inverse(alpha_one), sigma.col(0));
  for (int i = 0; i < d; ++i) {
    const VVec expect = j_apply(spec, out.alpha.col(i), out.v0);
    if ((sigma.col(i) - expect).norm() > tol::solve * scale) fail(ErrorCode::validation, "C-block of h is not zeta -> alpha(zeta) v0");
  }
  Rng rng(kDefaultSeed);
  const CNum a1_inv = c_inverse(alpha_one);
  for (int s = 0; s < 8; ++s) {
    const CNum zeta = rng.unit(d);
    const VVec v = rng.unit(nv);
    const VVec lhs = out.phi * j_apply(spec, zeta, v);
    const VVec rhs = j_apply(spec, out.alpha * zeta, j_apply(spec, a1_inv, out.phi * v));
    if ((lhs - rhs).norm() > tol::solve * scale) fail(ErrorCode::validation, "phi(zeta v) != alpha(zeta) alpha(1)^{-1} phi(v)");
  }
  return out;
}

Mat n_from_lambda(const ModuleSpec& spec, const LambdaMatrix& lambda) {
  if (lambda.size() != spec.n + 1 || lambda.d() != spec.d) fail(ErrorCode::dimension_mismatch, "Lambda shape");
  Mat n = Mat::Identity(spec.dim_w(), spec.dim_w());
  for (int j = 1; j <= spec.n; ++j) {
    const VVec uj = standard_v(spec, j);
    for (int k = 0; k < j; ++k) {
      const CNum& l = lambda.at(j, k);
      if (l.isZero(0.0)) continue;
      for (int i = 0; i < spec.d; ++i) n.block(j * spec.d, k * spec.d + i, spec.d, 1) = mult_v(spec, basis_element(spec.d, i), l, uj);
    }
  }
  return n;
}

LambdaMatrix lambda_from_n(const ModuleSpec& spec, const Mat& n) {
  const double scale = std::max(1.0, op_norm(n));
  LambdaMatrix out(spec.n + 1, spec.d);
  for (int j = 0; j <= spec.n; ++j) {
    if ((block(spec, n, j, j) - Mat::Identity(spec.d, spec.d)).norm() > tol::solve * scale)
      fail(ErrorCode::validation, "n is not unipotent");
    for (int k = j + 1; k <= spec.n; ++k)
      if (block(spec, n, j, k).norm() > tol::solve * scale) fail(ErrorCode::validation, "n is not block lower triangular");
    for (int k = 0; k < j; ++k) out.at(j, k) = block(spec, n, j, k).col(0);
  }
  return out;
}

LambdaMatrix lambda_compose(const ModuleSpec& spec, const LambdaMatrix& l1, const LambdaMatrix& l2) {
  if (spec.d > 4) fail(ErrorCode::domain, "Lambda composition needs associative C");
  const VVec u = standard_v(spec, 1);
  LambdaMatrix out(spec.n + 1, spec.d);
  for (int j = 0; j <= spec.n; ++j) {
    for (int k = 0; k < j; ++k) {
      CNum sum = l1.at(j, k) + l2.at(j, k);
      for (int i = k + 1; i < j; ++i) sum += mult_v(spec, l2.at(i, k), l1.at(j, i), u);
      out.at(j, k) = sum;
    }
  }
  return out;
}

Iwasawa iwasawa(const ModuleSpec& spec, const Mat& g) {
  require_decomposable(spec, g);
  const int d = spec.d, nn = spec.n;

  // Flag-adapted orthonormal C-frame: f_j spans g(W_j) minus g(W_{j+1}).
  std::vector<WVec> frame(static_cast<std::size_t>(nn + 1));
  for (int j = nn; j >= 0; --j) {
    const Mat later = orthonormal_span(g.rightCols((nn - j) * d));
    Mat cols = g.middleCols(j * d, d);
    if (later.cols() > 0) cols -= later * (later.transpose() * cols);
    frame[static_cast<std::size_t>(j)] = onb_cbasis(spec, cols).front();
  }
  const KMatrix k = k_from_frame(spec, frame);
  const Mat h = k.transpose() * g;
  const TripleForm tf = triple_form(spec, h);

  LambdaMatrix lambda(nn + 1, d);
  for (int j = 1; j <= nn; ++j) lambda.at(j, 0) = tf.v0.segment((j - 1) * d, d);
  for (int j = 1; j <= nn; ++j) {
    const VVec image = tf.phi * standard_v(spec, j);
    const CNum eta = image.segment((j - 1) * d, d);
    for (int i = j + 1; i <= nn; ++i)
      lambda.at(i, j) = divide(spec, image.segment((i - 1) * d, d), eta, standard_v(spec, i), Side::right);
  }
  const Mat n1 = n_from_lambda(spec, lambda);
  const Mat ma = n1.inverse() * h;

  const double scale = op_norm(h);
  ADiag a;
  a.t.resize(nn + 1);
  Mat m = Mat::Zero(spec.dim_w(), spec.dim_w());
  for (int j = 0; j <= nn; ++j) {
    for (int i = 0; i <= nn; ++i)
      if (i != j && block(spec, ma, i, j).norm() > tol::solve * scale)
        fail(ErrorCode::validation, "n^{-1} h is not block diagonal");
    const Mat b = block(spec, ma, j, j);
    a.t(j) = b.col(0).norm();
    m.block(j * d, j * d, d, d) = b / a.t(j);
  }
  if (!near_k(spec, m)) fail(ErrorCode::k_construction, "M_P part is not in K");
  const Mat am = m * a.matrix(spec);
  const Mat n = am.inverse() * n1 * am;

  Iwasawa out;
  out.k = k * m;
  out.a = a;
  out.lambda = lambda_from_n(spec, n);
  out.n = n_from_lambda(spec, out.lambda);
  if ((out.n - n).norm() > tol::solve * std::max(1.0, n.norm())) fail(ErrorCode::validation, "N part does not match its Lambda");
  if (!near_k(spec, out.k)) fail(ErrorCode::k_construction, "K part is not in K");
  out.residual = op_norm(g - out.k * a.matrix(spec) * out.n);
  return out;
}

Cartan cartan(const ModuleSpec& spec, const Mat& g) {
  require_decomposable(spec, g);
  Eigen::SelfAdjointEigenSolver<Mat> eig(g.transpose() * g);
  const Vec values = eig.eigenvalues().reverse();
  const Mat vectors = eig.eigenvectors().rowwise().reverse();
  const double top = values(0);

  std::vector<WVec> frame;
  Vec t(spec.n + 1);
  Eigen::Index start = 0;
  while (start < values.size()) {
    Eigen::Index stop = start + 1;
    while (stop < values.size() && std::abs(values(stop) - values(stop - 1)) <= 1e-8 * top) ++stop;
    if ((stop - start) % spec.d != 0) fail(ErrorCode::numerical_degeneracy, "eigenspace dimension is not a multiple of d");
    for (const auto& w : onb_cbasis(spec, vectors.middleCols(start, stop - start))) {
      t(static_cast<Eigen::Index>(frame.size())) = std::sqrt((g * w).squaredNorm());
      frame.push_back(w);
    }
    start = stop;
  }
  const KMatrix ke = k_from_frame(spec, frame);
  Cartan out;
  out.a.t = t;
  out.k2 = ke.transpose();
  out.k1 = g * ke * ADiag{t.cwiseInverse()}.matrix(spec);
  if (!near_k(spec, out.k1)) fail(ErrorCode::k_construction, "k1 = g k2^{-1} a^{-1} is not in K");
  out.residual = op_norm(g - out.k1 * out.a.matrix(spec) * out.k2);
  return out;
}

LambdaMatrix random_lambda(const ModuleSpec& spec, Rng& rng, double scale) {
  LambdaMatrix out(spec.n + 1, spec.d);
  for (int j = 0; j <= spec.n; ++j)
    for (int k = 0; k < j; ++k) out.at(j, k) = scale * rng.gaussian(spec.d);
  return out;
}

ADiag random_adiag(const ModuleSpec& spec, Rng& rng, double lo, double hi) {
  ADiag a;
  a.t.resize(spec.n + 1);
  for (int j = 0; j <= spec.n; ++j) a.t(j) = rng.uniform(lo, hi);
  return a;
}

Mat random_glwc(const ModuleSpec& spec, Rng& rng) {
  const KMatrix k = random_k(spec, rng);
  const ADiag a = random_adiag(spec, rng);
  const Mat n = n_from_lambda(spec, random_lambda(spec, rng));
  return k * a.matrix(spec) * n * random_k(spec, rng);
}

Mat real_block_matrix(const ModuleSpec& spec, const Mat& a) {
  if (a.rows() != spec.n + 1 || a.cols() != spec.n + 1) fail(ErrorCode::dimension_mismatch, "real block matrix shape");
  Mat out = Mat::Zero(spec.dim_w(), spec.dim_w());
  for (int j = 0; j <= spec.n; ++j)
    for (int k = 0; k <= spec.n; ++k)
      out.block(j * spec.d, k * spec.d, spec.d, spec.d) = a(j, k) * Mat::Identity(spec.d, spec.d);
  return out;
}

double line_restriction_spread(const ModuleSpec& spec, const Mat& g, const WVec& w) {
  Eigen::JacobiSVD<Mat> svd(g * cline_through(spec, w).frame().transpose());
  const Vec& s = svd.singularValues();
  return s(0) / s(s.size() - 1) - 1.0;
}

}  // namespace rankone
