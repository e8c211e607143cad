#pragma once

#include <vector>

#include "rankone/cpw.hpp"

namespace rankone {

enum class Model { compact, ball };

// Gram matrix G with <X,Y>_w = X^T G Y.
Mat metric_tensor(const ModuleSpec& spec, Model model, const WVec& w);
double metric_inner(const ModuleSpec& spec, Model model, const WVec& w, const Vec& x, const Vec& y);
double metric_norm(const ModuleSpec& spec, Model model, const WVec& w, const Vec& x);
// c_{|w|,phi} with phi the angle between Cw and CX.
double metric_scale(Model model, double radius, double angle);

CPWPoint exp0(const ModuleSpec& spec, Model model, const WVec& x, double t);
double distance(const ModuleSpec& spec, Model model, const CPWPoint& p, const CPWPoint& q);

double sectional_curvature(const ModuleSpec& spec, const WVec& x, const WVec& y, Model model = Model::compact);

struct CircleEstimate {
  double length_closed = 0.0;
  double length_numeric = 0.0;
  double estimate = 0.0;  // (3/pi)(2 pi r - L_r)/r^3 at radius r
};
CircleEstimate curvature_circle_estimate(const ModuleSpec& spec, const WVec& x, const WVec& y, double r,
                                         Model model = Model::compact);
// Richardson combination of the estimates at r and r/2.
double curvature_extrapolated(const ModuleSpec& spec, const WVec& x, const WVec& y, double r,
                              Model model = Model::compact);

double volume(const ModuleSpec& spec);
double volume_quadrature(const ModuleSpec& spec, int panels = 8);
// sqrt(det) of the compact metric at w, for checking the radial density.
double volume_density(const ModuleSpec& spec, const WVec& w);

enum class JacobiKind { z_type, v_type };
JacobiKind jacobi_kind(const ModuleSpec& spec, const WVec& x, const WVec& y);
double jacobi_profile(const ModuleSpec& spec, const WVec& x, const WVec& y, double t);

struct TotallyGeodesicSpec {
  int d0 = 0;
  int n0 = 0;
  Mat c0_basis;  // d x d0, orthonormal, contains 1
  Mat w0_basis;  // orthonormal columns spanning W0 = C0 + sum_{j<=n0} C0 u_j
  Mat w1_basis;  // W1 = C + sum_{j<=n0} C u_j
  // involutions[0] is +1 on W1 and -1 on its complement; the remaining ones
  // restrict to C as reflections in index-2 subalgebras, jointly fixing W0 in W1.
  std::vector<Mat> involutions;
};
TotallyGeodesicSpec totally_geodesic(const ModuleSpec& spec, int d0, int n0);
// Dimension of the common +1 eigenspace of a set of involutions.
Mat common_fixed_space(const std::vector<Mat>& involutions, Eigen::Index dim);

// w -> 2w/(1-|w|^2) from the sphere model of dimension n+1 onto RP^{n+1}.
WVec double_cover(const ModuleSpec& spec, const WVec& w);
ModuleSpec double_cover_source(const ModuleSpec& spec);

std::pair<WVec, WVec> random_orthonormal_pair(const ModuleSpec& spec, Rng& rng);

}  // namespace rankone
