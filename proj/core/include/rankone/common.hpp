#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace rankone {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Elements of the division-like algebra C, of the module V, and of W = C + V.
// All three are plain coordinate vectors; W points store the C part first.
using CNum = Vec;
using VVec = Vec;
using WVec = Vec;

inline constexpr std::uint64_t kDefaultSeed = 305419896;

namespace tol {
inline constexpr double identity = 1e-12;
inline constexpr double solve = 1e-9;
inline constexpr double line = 1e-8;
inline constexpr double orthogonal = 1e-10;
inline constexpr double fd_step = 1e-5;
inline constexpr double fd_check = 1e-6;
inline constexpr double branch = 1e-12;
}  // namespace tol

enum class ErrorCode {
  invalid_dimensions,
  dimension_mismatch,
  zero_divisor,
  zero_vector,
  j2_residual,
  singular_system,
  not_c_closed,
  constancy_violation,
  non_unit,
  not_glwc,
  k_construction,
  v_not_preserved,
  validation,
  ball_boundary,
  non_orthonormal,
  mixed_type,
  no_closed_subalgebra,
  chart_singularity,
  numerical_degeneracy,
  schema,
  domain,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

class Rng {
 public:
  explicit Rng(std::uint64_t seed = kDefaultSeed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  int integer(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(engine_);
  }
  Vec gaussian(Eigen::Index dim);
  // Uniform on the unit sphere: a normalized Gaussian draw.
  Vec unit(Eigen::Index dim);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Operator 2-norm.
double op_norm(const Mat& m);

// Orthonormal basis (columns) of the column span of m, using a rank cutoff
// relative to the largest singular value.
Mat orthonormal_span(const Mat& m, double rel_cutoff = 1e-10);

// Orthonormal basis of the orthogonal complement of span(basis) in R^dim.
Mat orthogonal_complement(const Mat& basis, Eigen::Index dim);

}  // namespace rankone
