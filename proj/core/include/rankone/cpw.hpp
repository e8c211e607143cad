#pragma once

#include <optional>
#include <variant>

#include "rankone/wspace.hpp"

namespace rankone {

// A point of CPW = W u W_inf: a finite point of W, or a C-line through 0.
class CPWPoint {
 public:
  static CPWPoint finite(WVec w) { return CPWPoint(std::move(w)); }
  static CPWPoint infinity(CLine line) { return CPWPoint(std::move(line)); }

  bool is_finite() const { return std::holds_alternative<WVec>(value_); }
  const WVec& w() const;
  const CLine& line() const;

 private:
  explicit CPWPoint(WVec w) : value_(std::move(w)) {}
  explicit CPWPoint(CLine line) : value_(std::move(line)) {}
  std::variant<WVec, CLine> value_;
};

bool points_equal(const ModuleSpec& spec, const CPWPoint& p, const CPWPoint& q, double tolerance = tol::line);

// Display form of a point at infinity: [1, v] when the line is not inside V,
// otherwise [0, v] with v a unit vector of the line.
struct InfinityForm {
  bool in_v = false;
  VVec v;
};
InfinityForm infinity_form(const ModuleSpec& spec, const CLine& line);
CPWPoint infinity_of(const ModuleSpec& spec, const WVec& w);  // [w]

CPWPoint phi0(const ModuleSpec& spec, const CPWPoint& p);
// psi_j swaps the C-line C with C u_j; in standard coordinates it swaps blocks 0 and j.
Mat psi_matrix(const ModuleSpec& spec, int j);
CPWPoint phi_j(const ModuleSpec& spec, int j, const CPWPoint& p);
int chart_cover_index(const ModuleSpec& spec, const CPWPoint& p);
CPWPoint hopf(const ModuleSpec& spec, const WVec& w);

// Closure of the affine C-subspace w0 + E: (w0 + E) together with the C-lines of E.
struct AffineClosure {
  WVec offset;
  Mat basis;  // orthonormal columns spanning E
  std::vector<WVec> cbasis;  // representatives of the C-lines of an orthonormal C-basis of E
  bool contains(const ModuleSpec& spec, const CPWPoint& p, double tolerance = tol::line) const;
};
AffineClosure closure_of_affine(const ModuleSpec& spec, const WVec& w0, const Mat& e_columns);
AffineClosure closure_of_affine(const ModuleSpec& spec, const WVec& w0, const CSubspace& e);

CPWPoint random_point(const ModuleSpec& spec, Rng& rng, double infinity_fraction = 0.2);

}  // namespace rankone
