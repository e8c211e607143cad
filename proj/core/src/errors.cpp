#include "rankone/common.hpp"

namespace rankone {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_dimensions: return "invalid-dimensions";
    case ErrorCode::dimension_mismatch: return "dimension-mismatch";
    case ErrorCode::zero_divisor: return "zero-divisor";
    case ErrorCode::zero_vector: return "zero-vector";
    case ErrorCode::j2_residual: return "j2-residual";
    case ErrorCode::singular_system: return "singular-system";
    case ErrorCode::not_c_closed: return "not-c-closed";
    case ErrorCode::constancy_violation: return "constancy-violation";
    case ErrorCode::non_unit: return "non-unit";
    case ErrorCode::not_glwc: return "not-glwc";
    case ErrorCode::k_construction: return "k-construction";
    case ErrorCode::v_not_preserved: return "v-not-preserved";
    case ErrorCode::validation: return "validation";
    case ErrorCode::ball_boundary: return "ball-boundary";
    case ErrorCode::non_orthonormal: return "non-orthonormal";
    case ErrorCode::mixed_type: return "mixed-type";
    case ErrorCode::no_closed_subalgebra: return "no-closed-subalgebra";
    case ErrorCode::chart_singularity: return "chart-singularity";
    case ErrorCode::numerical_degeneracy: return "numerical-degeneracy";
    case ErrorCode::schema: return "schema";
    case ErrorCode::domain: return "domain";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

Vec Rng::gaussian(Eigen::Index dim) {
  Vec out(dim);
  for (Eigen::Index i = 0; i < dim; ++i) out[i] = normal();
  return out;
}

Vec Rng::unit(Eigen::Index dim) {
  for (;;) {
    Vec g = gaussian(dim);
    double norm = g.norm();
    if (norm > 1e-8) return g / norm;
  }
}

double op_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

Mat orthonormal_span(const Mat& m, double rel_cutoff) {
  if (m.cols() == 0) return Mat(m.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
  const Vec& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return Mat(m.rows(), 0);
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > rel_cutoff * s(0)) ++rank;
  return svd.matrixU().leftCols(rank);
}

Mat orthogonal_complement(const Mat& basis, Eigen::Index dim) {
  if (basis.cols() == 0) return Mat::Identity(dim, dim);
  Mat proj = Mat::Identity(dim, dim) - basis * basis.transpose();
  Eigen::SelfAdjointEigenSolver<Mat> eig(proj);
  Mat out(dim, dim - basis.cols());
  Eigen::Index k = 0;
  for (Eigen::Index i = dim - 1; i >= 0 && k < out.cols(); --i) {
    out.col(k++) = eig.eigenvectors().col(i);
  }
  return out;
}

}  // namespace rankone
