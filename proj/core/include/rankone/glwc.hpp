#pragma once

#include <vector>

#include "rankone/wspace.hpp"

namespace rankone {

// Strictly lower-triangular (n+1)x(n+1) array of C entries; entry(j,k) for k < j.
class LambdaMatrix {
 public:
  LambdaMatrix() = default;
  LambdaMatrix(int size, int d);

  int size() const { return size_; }
  int d() const { return d_; }
  const CNum& at(int j, int k) const;
  CNum& at(int j, int k);
  double max_abs_diff(const LambdaMatrix& other) const;

 private:
  int size_ = 0;
  int d_ = 1;
  std::vector<CNum> entries_;
};

// Positive scale per standard C-line Cw_j.
struct ADiag {
  Vec t;
  Mat matrix(const ModuleSpec& spec) const;
};

bool is_glwc(const ModuleSpec& spec, const Mat& mat, int samples = 16, std::uint64_t seed = kDefaultSeed);

// Block form of h with h(V) = V: h(zeta, v) = (alpha zeta, J_{alpha zeta} v0 + phi v).
struct TripleForm {
  Mat alpha;
  Mat phi;
  VVec v0;
};
TripleForm triple_form(const ModuleSpec& spec, const Mat& h);

Mat n_from_lambda(const ModuleSpec& spec, const LambdaMatrix& lambda);
// Entries of n read back from its blocks (n must be unipotent block lower triangular).
LambdaMatrix lambda_from_n(const ModuleSpec& spec, const Mat& n);
// Lambda of n(l1) n(l2), valid for associative C.
LambdaMatrix lambda_compose(const ModuleSpec& spec, const LambdaMatrix& l1, const LambdaMatrix& l2);

struct Iwasawa {
  KMatrix k;
  ADiag a;
  LambdaMatrix lambda;
  Mat n;
  double residual = 0.0;  // |g - k a n| in operator norm
};
Iwasawa iwasawa(const ModuleSpec& spec, const Mat& g);

struct Cartan {
  KMatrix k1;
  ADiag a;  // descending
  KMatrix k2;
  double residual = 0.0;
};
Cartan cartan(const ModuleSpec& spec, const Mat& g);

LambdaMatrix random_lambda(const ModuleSpec& spec, Rng& rng, double scale = 0.5);
ADiag random_adiag(const ModuleSpec& spec, Rng& rng, double lo = 0.5, double hi = 2.0);
Mat random_glwc(const ModuleSpec& spec, Rng& rng);
// g(sum zeta_j w_j) = sum_j (sum_k a_jk zeta_k) w_j for a real invertible matrix a.
Mat real_block_matrix(const ModuleSpec& spec, const Mat& a);

// Singular-value spread max/min - 1 of g restricted to the C-line through w.
double line_restriction_spread(const ModuleSpec& spec, const Mat& g, const WVec& w);

}  // namespace rankone
