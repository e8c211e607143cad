#pragma once

#include <vector>

#include "rankone/clifford.hpp"

namespace rankone {

CNum zeta_part(const ModuleSpec& spec, const WVec& w);
VVec v_part(const ModuleSpec& spec, const WVec& w);
WVec join(const CNum& zeta, const VVec& v);
WVec standard_w(const ModuleSpec& spec, int j);  // w_0 = (1,0), w_j = (0,u_j)

// A C-line through 0, stored as d orthonormal rows.
class CLine {
 public:
  CLine() = default;
  explicit CLine(Mat frame);  // rows are orthonormalized exactly; caller guarantees C-closure

  const Mat& frame() const { return frame_; }
  Mat projector() const { return frame_.transpose() * frame_; }
  Eigen::Index dim_w() const { return frame_.cols(); }
  WVec representative() const { return frame_.row(0).transpose(); }

 private:
  Mat frame_;
};

double projector_distance(const Mat& p, const Mat& q);
bool lines_equal(const CLine& a, const CLine& b, double tolerance = tol::line);

CLine cline_through(const ModuleSpec& spec, const WVec& w);
// Line spanned by an arbitrary d-dimensional subspace (used for images under maps).
CLine cline_from_span(const Mat& columns);

double cline_angle(const ModuleSpec& spec, const WVec& w, const WVec& w2);

// Ordered mutually orthogonal C-lines.
struct CSubspace {
  std::vector<CLine> lines;
  Mat basis() const;  // columns
};

// Orthonormal C-basis of the C-closed subspace spanned by the given columns.
std::vector<WVec> onb_cbasis(const ModuleSpec& spec, const Mat& subspace_columns);
std::vector<WVec> onb_cbasis(const ModuleSpec& spec, const CSubspace& subspace);
std::vector<WVec> onb_cbasis(const ModuleSpec& spec);

using KMatrix = Mat;

KMatrix sigma_rot(const ModuleSpec& spec, const VVec& v0, double theta);
KMatrix m_alpha(const ModuleSpec& spec, const std::vector<CNum>& word);
KMatrix k_to_point(const ModuleSpec& spec, const WVec& w);
// rho_t = sigma_1^{-1} m_t sigma_1 with eta_t = cos t 1 + sin t z (associative C).
KMatrix rho_t(const ModuleSpec& spec, const CNum& z, double t);

// Element of M (block diagonal on C + V) sending (z, v) to (z2, v2), for unit z, z2 in C'
// and unit v, v2 in V.
KMatrix m_transport(const ModuleSpec& spec, const CNum& z, const VVec& v, const CNum& z2, const VVec& v2);

// Element of K sending the standard C-frame w_j to the given orthonormal C-basis f_j.
KMatrix k_from_frame(const ModuleSpec& spec, const std::vector<WVec>& frame);

KMatrix random_k(const ModuleSpec& spec, Rng& rng);

// Image of a line under any GL(W,C) element.
CLine map_line(const Mat& g, const CLine& line);

// C-line preservation of sampled lines, without the orthogonality requirement.
double line_preservation_residual(const ModuleSpec& spec, const Mat& g, int samples, std::uint64_t seed);
bool is_k_member(const ModuleSpec& spec, const Mat& mat, int samples = 16, std::uint64_t seed = kDefaultSeed);

}  // namespace rankone
