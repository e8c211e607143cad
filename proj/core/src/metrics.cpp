#include "rankone/metrics.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/trapezoidal.hpp>

#include <cmath>
#include <numbers>

#include "rankone/transforms.hpp"

namespace rankone {
namespace {

constexpr double kPi = std::numbers::pi;

double radial_factor(Model model, double r2) { return model == Model::compact ? 1.0 + r2 : 1.0 - r2; }

void require_orthonormal(const WVec& x, const WVec& y) {
  if (std::abs(x.norm() - 1.0) > 1e-9 || std::abs(y.norm() - 1.0) > 1e-9 || std::abs(x.dot(y)) > 1e-9)
    fail(ErrorCode::non_orthonormal, "X and Y must be orthonormal");
}

double line_component(const ModuleSpec& spec, const WVec& x, const WVec& y) {
  return (cline_through(spec, x).projector() * y).norm();
}

Mat coordinate_block(int dim, int start, int count) {
  Mat out = Mat::Zero(dim, count);
  for (int i = 0; i < count; ++i) out(start + i, i) = 1.0;
  return out;
}

}  // namespace

Mat metric_tensor(const ModuleSpec& spec, Model model, const WVec& w) {
  const double r2 = w.squaredNorm();
  if (model == Model::ball && r2 >= 1.0) fail(ErrorCode::ball_boundary, "ball metric needs |w| < 1");
  const int dim = spec.dim_w();
  if (r2 == 0.0) return Mat::Identity(dim, dim);
  const double f = radial_factor(model, r2);
  const Mat p = cline_through(spec, w).projector();
  return p / (f * f) + (Mat::Identity(dim, dim) - p) / f;
}

double metric_inner(const ModuleSpec& spec, Model model, const WVec& w, const Vec& x, const Vec& y) {
  return x.dot(metric_tensor(spec, model, w) * y);
}

double metric_norm(const ModuleSpec& spec, Model model, const WVec& w, const Vec& x) {
  return std::sqrt(metric_inner(spec, model, w, x, x));
}

double metric_scale(Model model, double radius, double angle) {
  const double f = radial_factor(model, radius * radius);
  const double c = std::cos(angle), s = std::sin(angle);
  return std::sqrt(c * c / (f * f) + s * s / f);
}

CPWPoint exp0(const ModuleSpec& spec, Model model, const WVec& x, double t) {
  if (std::abs(x.norm() - 1.0) > 1e-10) fail(ErrorCode::non_unit, "exp0 needs a unit direction");
  if (model == Model::ball) return CPWPoint::finite(std::tanh(t) * x);
  if (std::abs(std::cos(t)) < tol::branch) return infinity_of(spec, x);
  return CPWPoint::finite(std::tan(t) * x);
}

double distance(const ModuleSpec& spec, Model model, const CPWPoint& p, const CPWPoint& q) {
  if (model == Model::ball) {
    if (!p.is_finite() || !q.is_finite()) fail(ErrorCode::domain, "ball distance needs finite points");
    if (p.w().norm() >= 1.0 || q.w().norm() >= 1.0) fail(ErrorCode::ball_boundary, "points must lie in the open ball");
    CPWPoint image = q;
    const double r = p.w().norm();
    if (r > 0.0) {
      const KMatrix k = k_to_point(spec, p.w() / r);
      image = a_t_apply(spec, -std::atanh(r), linear_apply(spec, k.transpose(), q));
    }
    return std::atanh(std::min(1.0, image.w().norm()));
  }
  CPWPoint image = q;
  if (p.is_finite()) {
    const double r = p.w().norm();
    if (r > 0.0) {
      const KMatrix k = k_to_point(spec, p.w() / r);
      image = b_theta_apply(spec, -std::atan(r), linear_apply(spec, k.transpose(), q));
    }
  } else {
    const KMatrix k = k_to_point(spec, p.line().representative());
    image = phi0(spec, linear_apply(spec, k.transpose(), q));
  }
  if (!image.is_finite()) return kPi / 2;
  return std::atan(image.w().norm());
}

double sectional_curvature(const ModuleSpec& spec, const WVec& x, const WVec& y, Model model) {
  require_orthonormal(x, y);
  const double p = line_component(spec, x, y);
  const double sigma = 1.0 + 3.0 * p * p;
  return model == Model::compact ? sigma : -sigma;
}

CircleEstimate curvature_circle_estimate(const ModuleSpec& spec, const WVec& x, const WVec& y, double r, Model model) {
  require_orthonormal(x, y);
  if (!(r > 0.0 && r < 0.5)) fail(ErrorCode::domain, "circle radius must lie in (0, 0.5)");
  const double p = line_component(spec, x, y);
  CircleEstimate out;
  if (model == Model::compact) {
    const double t = std::tan(r);
    out.length_closed = 2.0 * kPi * t / (1.0 + t * t) * std::sqrt(1.0 + (1.0 - p * p) * t * t);
  } else {
    const double t = std::tanh(r);
    out.length_closed = 2.0 * kPi * t / (1.0 - t * t) * std::sqrt(1.0 - (1.0 - p * p) * t * t);
  }
  const double radius = model == Model::compact ? std::tan(r) : std::tanh(r);
  auto speed = [&](double th) {
    const WVec point = radius * (std::cos(th) * x + std::sin(th) * y);
    const WVec tangent = radius * (-std::sin(th) * x + std::cos(th) * y);
    return metric_norm(spec, model, point, tangent);
  };
  out.length_numeric = boost::math::quadrature::trapezoidal(speed, 0.0, 2.0 * kPi, 1e-14);
  if (std::abs(out.length_numeric - out.length_closed) > 1e-8 * out.length_closed)
    fail(ErrorCode::validation, "closed-form and numerical circle lengths disagree");
  out.estimate = 3.0 / kPi * (2.0 * kPi * r - out.length_closed) / (r * r * r);
  return out;
}

double curvature_extrapolated(const ModuleSpec& spec, const WVec& x, const WVec& y, double r, Model model) {
  const double coarse = curvature_circle_estimate(spec, x, y, r, model).estimate;
  const double fine = curvature_circle_estimate(spec, x, y, r / 2, model).estimate;
  return (4.0 * fine - coarse) / 3.0;
}

double volume(const ModuleSpec& spec) {
  const double d = spec.d, m = spec.n + 1;
  return std::exp(std::lgamma(d / 2) - std::lgamma((m + 1) * d / 2) + m * d / 2 * std::log(kPi));
}

double volume_quadrature(const ModuleSpec& spec, int panels) {
  const double d = spec.d, m = spec.n + 1;
  const double k = m * d;
  const double sphere_area = 2.0 * std::pow(kPi, k / 2) / std::tgamma(k / 2);
  // x = |w|^2 = tan^2(phi) turns the radial integral into 2 sin^{md-1} cos^{d-1} on [0, pi/2].
  auto integrand = [&](double phi) { return 2.0 * std::pow(std::sin(phi), k - 1) * std::pow(std::cos(phi), d - 1); };
  const double width = kPi / 2 / panels;
  double total = 0.0;
  for (int i = 0; i < panels; ++i)
    total += boost::math::quadrature::gauss<double, 30>::integrate(integrand, i * width, (i + 1) * width);
  return 0.5 * sphere_area * total;
}

double volume_density(const ModuleSpec& spec, const WVec& w) {
  return std::sqrt(metric_tensor(spec, Model::compact, w).determinant());
}

JacobiKind jacobi_kind(const ModuleSpec& spec, const WVec& x, const WVec& y) {
  require_orthonormal(x, y);
  const double q = line_component(spec, x, y);
  if (std::abs(q - 1.0) <= 1e-9) return JacobiKind::z_type;
  if (q <= 1e-9) return JacobiKind::v_type;
  fail(ErrorCode::mixed_type, "Y must lie in CX or have CY orthogonal to CX");
}

double jacobi_profile(const ModuleSpec& spec, const WVec& x, const WVec& y, double t) {
  jacobi_kind(spec, x, y);
  const double s = std::tan(t);
  return metric_norm(spec, Model::compact, s * x, s * y);
}

Mat common_fixed_space(const std::vector<Mat>& involutions, Eigen::Index dim) {
  Mat stacked(dim * static_cast<Eigen::Index>(involutions.size()), dim);
  for (std::size_t i = 0; i < involutions.size(); ++i)
    stacked.middleRows(static_cast<Eigen::Index>(i) * dim, dim) = involutions[i] - Mat::Identity(dim, dim);
  if (involutions.empty()) return Mat::Identity(dim, dim);
  Eigen::JacobiSVD<Mat> svd(stacked, Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > 1e-8) ++rank;
  return svd.matrixV().rightCols(dim - rank);
}

TotallyGeodesicSpec totally_geodesic(const ModuleSpec& spec, int d0, int n0) {
  if (!spec.j2_expected) fail(ErrorCode::domain, "totally geodesic construction needs a J2 module");
  if (n0 < 0 || n0 > spec.n || d0 < 1 || d0 > spec.d) fail(ErrorCode::domain, "need 1 <= d0 <= d and 0 <= n0 <= n");
  const int d = spec.d, dim = spec.dim_w();
  TotallyGeodesicSpec out;
  out.d0 = d0;
  out.n0 = n0;

  // C0: 1 plus imaginary units closed under the product at u_1.
  const bool power_of_two = d0 == 1 || d0 == 2 || d0 == 4 || d0 == 8;
  if (n0 >= 1 && !power_of_two) fail(ErrorCode::no_closed_subalgebra, "d0 must be 1, 2, 4 or 8");
  const bool subalgebra = spec.n >= 1 && power_of_two && d0 < d;
  Mat c0 = coordinate_block(d, 0, d0);
  if (subalgebra) {
    const VVec u1 = standard_v(spec, 1);
    if (d0 == 4) {
      const CNum z3 = mult_v(spec, basis_element(d, 1), basis_element(d, 2), u1);
      c0.col(3) = z3;
    }
    const Mat outside = Mat::Identity(d, d) - c0 * c0.transpose();
    for (int a = 0; a < d0; ++a)
      for (int b = 0; b < d0; ++b)
        if ((outside * mult_v(spec, c0.col(a), c0.col(b), u1)).norm() > 1e-10)
          fail(ErrorCode::no_closed_subalgebra, "span is not closed under the product");
  }
  out.c0_basis = c0;

  Mat w0 = Mat::Zero(dim, d0 * (n0 + 1));
  Mat w1 = Mat::Zero(dim, d * (n0 + 1));
  for (int j = 0; j <= n0; ++j) {
    w0.block(j * d, j * d0, d, d0) = c0;
    w1.block(j * d, j * d, d, d).setIdentity();
  }
  out.w0_basis = w0;
  out.w1_basis = w1;

  Mat reflect_w1 = -Mat::Identity(dim, dim);
  reflect_w1.topLeftCorner(d * (n0 + 1), d * (n0 + 1)).setIdentity();
  out.involutions.push_back(reflect_w1);

  auto blockwise = [&](const Mat& c_map) {
    Mat m = Mat::Zero(dim, dim);
    for (int j = 0; j <= spec.n; ++j) m.block(j * d, j * d, d, d) = c_map;
    return m;
  };

  if (subalgebra) {
    // Doubling chain C0 = D_0 < D_1 < ... < D_r = C with units y_1..y_r.
    const VVec u1 = standard_v(spec, 1);
    std::vector<CNum> units;
    Mat chain = c0;
    while (chain.cols() < d) {
      const CNum y = orthogonal_complement(chain, d).col(0);
      units.push_back(y);
      Mat grown(d, 2 * chain.cols());
      grown.leftCols(chain.cols()) = chain;
      for (Eigen::Index c = 0; c < chain.cols(); ++c) grown.col(chain.cols() + c) = mult_v(spec, chain.col(c), y, u1);
      chain = orthonormal_span(grown);
    }
    const int steps = static_cast<int>(units.size());
    for (int k = 0; k < steps; ++k) {
      // Index-2 subalgebra containing D_k but not y_{k+1}: double D_k by the later units.
      Mat sub = c0;
      for (int i = 0; i < k; ++i) {
        Mat grown(d, 2 * sub.cols());
        grown.leftCols(sub.cols()) = sub;
        for (Eigen::Index c = 0; c < sub.cols(); ++c)
          grown.col(sub.cols() + c) = mult_v(spec, sub.col(c), units[static_cast<std::size_t>(i)], u1);
        sub = orthonormal_span(grown);
      }
      for (int i = k + 1; i < steps; ++i) {
        Mat grown(d, 2 * sub.cols());
        grown.leftCols(sub.cols()) = sub;
        for (Eigen::Index c = 0; c < sub.cols(); ++c)
          grown.col(sub.cols() + c) = mult_v(spec, sub.col(c), units[static_cast<std::size_t>(i)], u1);
        sub = orthonormal_span(grown);
      }
      out.involutions.push_back(blockwise(2.0 * sub * sub.transpose() - Mat::Identity(d, d)));
    }
  } else if (d0 < d) {
    // n0 = 0 and C0 is not a subalgebra: only realizable when K acts on C by all of O(d).
    if (spec.n != 0) fail(ErrorCode::no_closed_subalgebra, "no involution of K reflects C in this C0");
    out.involutions.push_back(2.0 * c0 * c0.transpose() - Mat::Identity(dim, dim));
  }

  for (const auto& inv : out.involutions) {
    if ((inv * inv - Mat::Identity(dim, dim)).norm() > 1e-10) fail(ErrorCode::validation, "constructed map is not an involution");
    if (!is_k_member(spec, inv)) fail(ErrorCode::validation, "constructed involution is not in K");
  }
  const Mat fixed_w1 = common_fixed_space({reflect_w1}, dim);
  if (fixed_w1.cols() != w1.cols() || (fixed_w1 * fixed_w1.transpose() - w1 * w1.transpose()).norm() > 1e-8)
    fail(ErrorCode::validation, "first involution does not fix exactly W1");
  const Mat fixed = common_fixed_space(out.involutions, dim);
  if (fixed.cols() != w0.cols() || (fixed * fixed.transpose() - w0 * w0.transpose()).norm() > 1e-8)
    fail(ErrorCode::validation, "involutions do not fix exactly W0");
  for (int a = 0; a < d0 && spec.vdim > 0 && n0 >= 1; ++a) {
    const Mat v0 = w0.bottomRows(spec.vdim).rightCols(d0 * n0);
    const Mat image = j_matrix(spec, c0.col(a)) * v0;
    if ((image - v0 * (v0.transpose() * image)).norm() > 1e-10) fail(ErrorCode::validation, "C0 does not preserve V0");
  }
  return out;
}

ModuleSpec double_cover_source(const ModuleSpec& spec) {
  if (spec.d != 1 || spec.n < 1) fail(ErrorCode::domain, "double cover needs d = 1 and n >= 1");
  return make_module(spec.n + 1, 0);
}

WVec double_cover(const ModuleSpec& spec, const WVec& w) {
  if (spec.d != 1 || spec.n < 1) fail(ErrorCode::domain, "double cover needs d = 1 and n >= 1");
  if (w.size() != spec.dim_w()) fail(ErrorCode::dimension_mismatch, "double cover point size");
  const double r2 = w.squaredNorm();
  if (std::abs(1.0 - r2) < 1e-12) fail(ErrorCode::domain, "the unit sphere is excluded");
  return 2.0 * w / (1.0 - r2);
}

std::pair<WVec, WVec> random_orthonormal_pair(const ModuleSpec& spec, Rng& rng) {
  const WVec x = rng.unit(spec.dim_w());
  for (;;) {
    WVec y = rng.gaussian(spec.dim_w());
    y -= x.dot(y) * x;
    if (y.norm() > 1e-6) return {x, y / y.norm()};
  }
}

}  // namespace rankone
