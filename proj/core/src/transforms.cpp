#include "rankone/transforms.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "rankone/metrics.hpp"

namespace rankone {
namespace {

using Complex = std::complex<double>;
constexpr double kPi = std::numbers::pi;

CPWPoint at_infinity_with_v(const ModuleSpec& spec, const VVec& v) {
  return infinity_of(spec, join(unit_element(spec.d), v));
}

VVec scaled_v(const ModuleSpec& spec, const CNum& factor, const VVec& v) {
  return spec.vdim > 0 ? j_apply(spec, factor, v) : VVec();
}

// theta(tau_{(t,0)}): (eta,u) -> ((1 - t eta)^{-1} eta, (1 - t eta)^{-1} u).
CPWPoint theta_translate_axis(const ModuleSpec& spec, double t, const CPWPoint& p) {
  if (p.is_finite()) {
    const CNum eta = zeta_part(spec, p.w());
    const CNum denom = unit_element(spec.d) - t * eta;
    if (denom.norm() > tol::branch) {
      const CNum eta2 = apply_complex(eta, [t](Complex z) { return z / (1.0 - t * z); });
      const CNum factor = apply_complex(eta, [t](Complex z) { return 1.0 / (1.0 - t * z); });
      return CPWPoint::finite(join(eta2, scaled_v(spec, factor, v_part(spec, p.w()))));
    }
  }
  // theta(tau_{(t,0)}) = phi0 tau_{(-t,0)} phi0 on the singular locus and at infinity.
  const CPWPoint q = phi0(spec, p);
  const CPWPoint r = q.is_finite() ? CPWPoint::finite(q.w() - t * standard_w(spec, 0)) : q;
  return phi0(spec, r);
}

Primitive theta_primitive(const Primitive& p) {
  return std::visit(
      [](const auto& x) -> Primitive {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, prim::ATime>) {
          return prim::ATime{-x.t};
        } else if constexpr (std::is_same_v<T, prim::Translate>) {
          return prim::ThetaTranslate{x.w};
        } else if constexpr (std::is_same_v<T, prim::ThetaTranslate>) {
          return prim::Translate{x.w};
        } else if constexpr (std::is_same_v<T, prim::GLMat>) {
          return prim::GLMat{Mat(x.mat.transpose().inverse())};
        } else {
          return x;
        }
      },
      p);
}

TransformWord expand_from(const TransformWord& word, bool flipped) {
  TransformWord out;
  out.reserve(word.size());
  for (const auto& p : word) {
    if (std::holds_alternative<prim::ThetaConj>(p)) {
      flipped = !flipped;
      continue;
    }
    out.push_back(flipped ? theta_primitive(p) : p);
  }
  return out;
}

double finite_scale(const WVec& w) { return std::max(1.0, w.norm()); }

}  // namespace

CPWPoint b_theta_apply(const ModuleSpec& spec, double theta, const CPWPoint& p) {
  const double c = std::cos(theta), s = std::sin(theta);
  if (p.is_finite()) {
    const CNum zeta = zeta_part(spec, p.w());
    const VVec v = v_part(spec, p.w());
    const CNum denom = c * unit_element(spec.d) - s * zeta;
    if (denom.norm() <= tol::branch) return at_infinity_with_v(spec, s * v);
    const CNum zeta2 = apply_complex(zeta, [c, s](Complex z) { return (s + c * z) / (c - s * z); });
    const CNum factor = apply_complex(zeta, [c, s](Complex z) { return 1.0 / (c - s * z); });
    return CPWPoint::finite(join(zeta2, scaled_v(spec, factor, v)));
  }
  const InfinityForm form = infinity_form(spec, p.line());
  if (form.in_v) return p;
  if (std::abs(s) > tol::branch) return CPWPoint::finite(join(-(c / s) * unit_element(spec.d), -form.v / s));
  return at_infinity_with_v(spec, c * form.v);
}

CPWPoint a_t_apply(const ModuleSpec& spec, double t, const CPWPoint& p) {
  const double ch = std::cosh(t), sh = std::sinh(t);
  if (p.is_finite()) {
    const CNum zeta = zeta_part(spec, p.w());
    const VVec v = v_part(spec, p.w());
    const CNum denom = sh * zeta + ch * unit_element(spec.d);
    if (denom.norm() <= tol::branch) return at_infinity_with_v(spec, -sh * v);
    const CNum zeta2 = apply_complex(zeta, [ch, sh](Complex z) { return (ch * z + sh) / (sh * z + ch); });
    const CNum factor = apply_complex(zeta, [ch, sh](Complex z) { return 1.0 / (sh * z + ch); });
    return CPWPoint::finite(join(zeta2, scaled_v(spec, factor, v)));
  }
  const InfinityForm form = infinity_form(spec, p.line());
  if (form.in_v || std::abs(sh) <= tol::branch) return p;
  return CPWPoint::finite(join((ch / sh) * unit_element(spec.d), form.v / sh));
}

CPWPoint translate_apply(const ModuleSpec& spec, const WVec& w0, const CPWPoint& p) {
  if (w0.size() != spec.dim_w()) fail(ErrorCode::dimension_mismatch, "translation vector size");
  if (!p.is_finite()) return p;
  return CPWPoint::finite(p.w() + w0);
}

CPWPoint linear_apply(const ModuleSpec& spec, const Mat& g, const CPWPoint& p) {
  if (g.rows() != spec.dim_w() || g.cols() != spec.dim_w()) fail(ErrorCode::dimension_mismatch, "matrix size");
  if (p.is_finite()) return CPWPoint::finite(g * p.w());
  return CPWPoint::infinity(map_line(g, p.line()));
}

CPWPoint theta_translate_apply(const ModuleSpec& spec, const WVec& w0, const CPWPoint& p) {
  if (w0.size() != spec.dim_w()) fail(ErrorCode::dimension_mismatch, "translation vector size");
  const double t = w0.norm();
  if (t == 0.0) return p;
  const KMatrix k = k_to_point(spec, w0 / t);
  const CPWPoint q = theta_translate_axis(spec, t, linear_apply(spec, k.transpose(), p));
  return linear_apply(spec, k, q);
}

CPWPoint apply_primitive(const ModuleSpec& spec, const Primitive& p, const CPWPoint& x) {
  return std::visit(
      [&](const auto& prim) -> CPWPoint {
        using T = std::decay_t<decltype(prim)>;
        if constexpr (std::is_same_v<T, prim::KMat> || std::is_same_v<T, prim::GLMat>) {
          return linear_apply(spec, prim.mat, x);
        } else if constexpr (std::is_same_v<T, prim::BTheta>) {
          return b_theta_apply(spec, prim.theta, x);
        } else if constexpr (std::is_same_v<T, prim::ATime>) {
          return a_t_apply(spec, prim.t, x);
        } else if constexpr (std::is_same_v<T, prim::Translate>) {
          return translate_apply(spec, prim.w, x);
        } else if constexpr (std::is_same_v<T, prim::ThetaTranslate>) {
          return theta_translate_apply(spec, prim.w, x);
        } else {
          fail(ErrorCode::domain, "the theta marker has no action on its own");
        }
      },
      p);
}

CPWPoint apply_word(const ModuleSpec& spec, const TransformWord& word, const CPWPoint& x) {
  CPWPoint out = x;
  for (const auto& p : expand_word(spec, word)) out = apply_primitive(spec, p, out);
  return out;
}

TransformWord theta_word(const ModuleSpec& spec, const TransformWord& word) {
  (void)spec;
  return expand_from(word, true);
}

TransformWord expand_word(const ModuleSpec& spec, const TransformWord& word) {
  (void)spec;
  return expand_from(word, false);
}

TransformWord invert_word(const ModuleSpec& spec, const TransformWord& word) {
  const TransformWord expanded = expand_word(spec, word);
  TransformWord out;
  out.reserve(expanded.size());
  for (auto it = expanded.rbegin(); it != expanded.rend(); ++it) {
    out.push_back(std::visit(
        [](const auto& x) -> Primitive {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, prim::KMat>) {
            return prim::KMat{Mat(x.mat.transpose())};
          } else if constexpr (std::is_same_v<T, prim::GLMat>) {
            return prim::GLMat{Mat(x.mat.inverse())};
          } else if constexpr (std::is_same_v<T, prim::BTheta>) {
            return prim::BTheta{-x.theta};
          } else if constexpr (std::is_same_v<T, prim::ATime>) {
            return prim::ATime{-x.t};
          } else if constexpr (std::is_same_v<T, prim::Translate>) {
            return prim::Translate{WVec(-x.w)};
          } else if constexpr (std::is_same_v<T, prim::ThetaTranslate>) {
            return prim::ThetaTranslate{WVec(-x.w)};
          } else {
            return x;
          }
        },
        *it));
  }
  return out;
}

TransformWord concat(TransformWord a, const TransformWord& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

TransformWord isometry_from_0_to(const ModuleSpec& spec, const CPWPoint& p) {
  const int dim = spec.dim_w();
  if (p.is_finite()) {
    const double r = p.w().norm();
    if (r == 0.0) return {};
    return {prim::BTheta{std::atan(r)}, prim::KMat{k_to_point(spec, p.w() / r)}};
  }
  const WVec rep = p.line().representative();
  return {prim::BTheta{kPi / 2}, prim::KMat{Mat(-Mat::Identity(dim, dim))}, prim::KMat{k_to_point(spec, rep)}};
}

TransformWord random_u_word(const ModuleSpec& spec, Rng& rng) {
  return {prim::KMat{random_k(spec, rng)}, prim::BTheta{rng.uniform(-kPi, kPi)}, prim::KMat{random_k(spec, rng)}};
}

TransformWord random_collineation_word(const ModuleSpec& spec, Rng& rng) {
  TransformWord word = random_u_word(spec, rng);
  word.push_back(prim::Translate{WVec(0.5 * rng.gaussian(spec.dim_w()))});
  word.push_back(prim::ATime{rng.uniform(-1.0, 1.0)});
  if (spec.n >= 1) word.push_back(prim::GLMat{random_glwc(spec, rng)});
  word.push_back(prim::ThetaTranslate{WVec(0.5 * rng.gaussian(spec.dim_w()))});
  word.push_back(prim::KMat{random_k(spec, rng)});
  return word;
}

double PolarHyperplane::residual(const ModuleSpec& spec, const CPWPoint& q) const {
  const int dim = spec.dim_w();
  if (center.is_finite() && center.w().norm() == 0.0) return q.is_finite() ? 1.0 : 0.0;
  const WVec w = center.is_finite() ? center.w() : center.line().representative();
  const Mat p = cline_through(spec, w).projector();
  // Finite part: (Cw)^perp - w/|w|^2 for finite centers, (Cw)^perp for [w].
  const WVec offset = center.is_finite() ? WVec(-w / w.squaredNorm()) : WVec(WVec::Zero(dim));
  if (q.is_finite()) return (p * q.w() - offset).norm() / finite_scale(q.w());
  return (q.line().frame() * p).norm();
}

bool PolarHyperplane::contains(const ModuleSpec& spec, const CPWPoint& q, double tolerance) const {
  return residual(spec, q) <= tolerance;
}

std::vector<CPWPoint> PolarHyperplane::sample(const ModuleSpec& spec, Rng& rng, int count) const {
  const TransformWord u = isometry_from_0_to(spec, center);
  std::vector<CPWPoint> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(apply_word(spec, u, infinity_of(spec, rng.unit(spec.dim_w()))));
  return out;
}

PolarHyperplane polar(const ModuleSpec& spec, const CPWPoint& p) {
  (void)spec;
  return PolarHyperplane{p};
}

CollineationFactors factor_collineation(const ModuleSpec& spec, const TransformWord& word, int samples,
                                        std::uint64_t seed) {
  if (spec.n < 1) fail(ErrorCode::domain, "collineation factorization needs n >= 1");
  const int dim = spec.dim_w(), d = spec.d;
  Rng rng(seed);

  // Image of W_inf: a projective hyperplane p* whose finite part is an affine subspace of codimension d.
  const int probes = 4 * dim + 8;
  std::vector<WVec> finite_images;
  for (int i = 0; i < probes; ++i) {
    const CPWPoint image = apply_word(spec, word, infinity_of(spec, rng.unit(dim)));
    if (image.is_finite()) finite_images.push_back(image.w());
  }
  CPWPoint center = CPWPoint::finite(WVec::Zero(dim));
  if (2 * finite_images.size() > static_cast<std::size_t>(probes)) {
    const Eigen::Index count = static_cast<Eigen::Index>(finite_images.size());
    Mat pts(dim, count);
    for (Eigen::Index i = 0; i < count; ++i) pts.col(i) = finite_images[static_cast<std::size_t>(i)];
    const WVec mean = pts.rowwise().mean();
    const Mat centered = pts.colwise() - mean;
    Eigen::JacobiSVD<Mat> svd(centered, Eigen::ComputeFullU);
    const Vec& s = svd.singularValues();
    if (s(dim - d - 1) < 1e-10 * s(0)) fail(ErrorCode::numerical_degeneracy, "image of the hyperplane at infinity is ill-conditioned");
    if (s(dim - d) > 1e-6 * s(0)) fail(ErrorCode::numerical_degeneracy, "image of the hyperplane at infinity is not affine of codimension d");
    const Mat normal = svd.matrixU().rightCols(d);
    const WVec offset = normal * (normal.transpose() * mean);
    if (offset.norm() < 1e-9) {
      center = CPWPoint::infinity(cline_from_span(normal));
    } else {
      center = CPWPoint::finite(-offset / offset.squaredNorm());
    }
  }
  const TransformWord u0 = isometry_from_0_to(spec, center);
  const TransformWord affine = concat(word, invert_word(spec, u0));

  const CPWPoint origin = apply_word(spec, affine, CPWPoint::finite(WVec::Zero(dim)));
  if (!origin.is_finite()) fail(ErrorCode::numerical_degeneracy, "affine part sends 0 to infinity");
  const WVec b = origin.w();
  Mat a_lin(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const CPWPoint image = apply_word(spec, affine, CPWPoint::finite(WVec::Unit(dim, i)));
    if (!image.is_finite()) fail(ErrorCode::numerical_degeneracy, "affine part sends a basis vector to infinity");
    a_lin.col(i) = image.w() - b;
  }
  Eigen::FullPivLU<Mat> lu(a_lin);
  if (!lu.isInvertible()) fail(ErrorCode::singular_system, "linear part is singular");

  const Iwasawa kan = iwasawa(spec, a_lin);
  CollineationFactors out;
  out.u = concat({prim::KMat{kan.k}}, u0);
  out.a = kan.a;
  out.lambda = kan.lambda;
  out.n = kan.n;
  out.w0 = lu.solve(b);

  const TransformWord rebuilt = recompose(spec, out);
  Rng check(seed ^ 0x9e3779b97f4a7c15ULL);
  for (int i = 0; i < samples; ++i) {
    const CPWPoint x = random_point(spec, check);
    out.residual = std::max(out.residual, distance(spec, Model::compact, apply_word(spec, word, x), apply_word(spec, rebuilt, x)));
  }
  return out;
}

TransformWord recompose(const ModuleSpec& spec, const CollineationFactors& f) {
  TransformWord word{prim::Translate{f.w0}, prim::GLMat{f.n}, prim::GLMat{f.a.matrix(spec)}};
  return concat(std::move(word), f.u);
}

double conformal_check(const ModuleSpec& spec, const TransformWord& word, const AffineCLine& line, const WVec& pt) {
  if (spec.d < 2) fail(ErrorCode::domain, "conformality is checked for d >= 2");
  const int dim = spec.dim_w();
  const Mat& frame = line.dir.frame();
  if (frame.cols() != dim || pt.size() != dim) fail(ErrorCode::dimension_mismatch, "line and point sizes");
  const WVec off_line = pt - line.base - frame.transpose() * (frame * (pt - line.base));
  if (off_line.norm() > tol::line * finite_scale(pt)) fail(ErrorCode::domain, "point is not on the line");

  const CPWPoint center = apply_word(spec, word, CPWPoint::finite(pt));
  // Pick the chart in which the image has the smallest coordinates.
  int chart = -1;
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j <= spec.n + 1; ++j) {
    const CPWPoint y = phi_j(spec, j, center);
    if (y.is_finite() && y.w().norm() < best) {
      best = y.w().norm();
      chart = j;
    }
  }
  if (chart < 0) fail(ErrorCode::chart_singularity, "image lies in no chart");
  auto chart_image = [&](const WVec& x) {
    const CPWPoint y = phi_j(spec, chart, apply_word(spec, word, CPWPoint::finite(x)));
    if (!y.is_finite()) fail(ErrorCode::chart_singularity, "finite-difference stencil leaves the chart");
    return y.w();
  };

  const double h = tol::fd_step * (1.0 + pt.norm());
  Mat jac(dim, spec.d);
  for (int i = 0; i < spec.d; ++i) {
    const WVec step = h * frame.row(i).transpose();
    jac.col(i) = (chart_image(pt + step) - chart_image(pt - step)) / (2.0 * h);
  }
  const WVec image = phi_j(spec, chart, center).w();
  const Mat source = frame * metric_tensor(spec, Model::compact, pt) * frame.transpose();
  const Mat target = jac.transpose() * metric_tensor(spec, Model::compact, image) * jac;
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> solver(target, source);
  if (solver.info() != Eigen::Success) fail(ErrorCode::numerical_degeneracy, "generalized eigenproblem failed");
  const Vec mu = solver.eigenvalues();
  if (mu.minCoeff() <= 0.0) fail(ErrorCode::numerical_degeneracy, "degenerate restricted Jacobian");
  return std::sqrt(mu.maxCoeff() / mu.minCoeff()) - 1.0;
}

ProjectiveLine::ProjectiveLine(const ModuleSpec& spec, const CPWPoint& p, const CPWPoint& q)
    : spec_(&spec), to_origin_(invert_word(spec, isometry_from_0_to(spec, p))) {
  const CPWPoint moved = apply_word(spec, to_origin_, q);
  WVec dir;
  if (moved.is_finite()) {
    if (moved.w().norm() < tol::solve) fail(ErrorCode::domain, "a line needs two distinct points");
    dir = moved.w();
  } else {
    dir = moved.line().representative();
  }
  projector_ = cline_through(spec, dir).projector();
}

double ProjectiveLine::residual(const CPWPoint& x) const {
  const CPWPoint moved = apply_word(*spec_, to_origin_, x);
  const Mat outside = Mat::Identity(projector_.rows(), projector_.cols()) - projector_;
  if (moved.is_finite()) return (outside * moved.w()).norm() / finite_scale(moved.w());
  return (moved.line().frame() * outside).norm();
}

WVec cayley(const ModuleSpec& spec, const WVec& p) {
  if (p.size() != spec.dim_w()) fail(ErrorCode::dimension_mismatch, "point size");
  if (p.norm() >= 1.0) fail(ErrorCode::ball_boundary, "cayley needs a point of the open ball");
  const CNum zeta = zeta_part(spec, p);
  if ((unit_element(spec.d) - zeta).norm() <= tol::branch) fail(ErrorCode::domain, "cayley is singular at zeta = 1");
  const CNum zeta2 = apply_complex(zeta, [](Complex z) { return (1.0 + z) / (1.0 - z); });
  const CNum factor = apply_complex(zeta, [](Complex z) { return 2.0 / (1.0 - z); });
  const WVec out = join(zeta2, scaled_v(spec, factor, v_part(spec, p)));
  if (height(spec, out) <= 0.0) fail(ErrorCode::validation, "cayley image left the domain");
  return out;
}

WVec cayley_inv(const ModuleSpec& spec, const WVec& p) {
  if (p.size() != spec.dim_w()) fail(ErrorCode::dimension_mismatch, "point size");
  const CNum zeta = zeta_part(spec, p);
  if ((unit_element(spec.d) + zeta).norm() <= tol::branch) fail(ErrorCode::domain, "inverse cayley is singular at zeta = -1");
  const CNum zeta2 = apply_complex(zeta, [](Complex z) { return (z - 1.0) / (z + 1.0); });
  const CNum factor = apply_complex(zeta, [](Complex z) { return 1.0 / (z + 1.0); });
  return join(zeta2, scaled_v(spec, factor, v_part(spec, p)));
}

double height(const ModuleSpec& spec, const WVec& p) {
  return zeta_part(spec, p)(0) - 0.25 * v_part(spec, p).squaredNorm();
}

CNum bmap(const ModuleSpec& spec, const VVec& v, const VVec& v2) {
  if (v.size() != spec.vdim || v2.size() != spec.vdim) fail(ErrorCode::dimension_mismatch, "V vector size");
  CNum out(spec.d);
  for (int i = 0; i < spec.d; ++i) out(i) = (spec.gens[static_cast<std::size_t>(i)] * v).dot(v2);
  return out;
}

WVec ntilde_apply(const ModuleSpec& spec, const CNum& z, const VVec& u, const WVec& p) {
  if (std::abs(z(0)) > tol::branch) fail(ErrorCode::domain, "the translation part must be imaginary");
  const VVec v = v_part(spec, p);
  const CNum zeta = zeta_part(spec, p) + z + 0.5 * bmap(spec, v, u) + 0.25 * u.squaredNorm() * unit_element(spec.d);
  return join(zeta, v + u);
}

WVec atilde_apply(const ModuleSpec& spec, double t, const WVec& p) {
  return join(std::exp(2.0 * t) * zeta_part(spec, p), std::exp(t) * v_part(spec, p));
}

}  // namespace rankone
