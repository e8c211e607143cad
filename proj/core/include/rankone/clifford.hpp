#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rankone/common.hpp"

namespace rankone {

// A concrete C-module: C = R^d with unit e_0, V = R^{n d}, and J_{e_i} = gens[i].
// For modules built by make_module the standard C-basis u_j of V is the first
// coordinate vector of block j, and J_zeta u_j has block-j coordinates zeta.
// Non-examples (make_non_j2_module) may have dim V not a multiple of d, so the
// V dimension is stored alongside n.
struct ModuleSpec {
  int d = 1;
  int n = 0;
  int vdim = 0;
  std::vector<Mat> gens;
  bool j2_expected = true;

  int dim_v() const { return vdim; }
  int dim_w() const { return d + vdim; }
};

enum class NonJ2Kind { d3, d4_mixed };

ModuleSpec make_module(int d, int n);
ModuleSpec make_non_j2_module(NonJ2Kind kind);

// Throws validation unless gens satisfy identity/skew/orthogonal/Clifford relations.
void validate_module(const ModuleSpec& spec, double tolerance = tol::identity);

CNum unit_element(int d);
CNum basis_element(int d, int i);
CNum conj(const CNum& zeta);
CNum c_inverse(const CNum& zeta);
double re(const CNum& zeta);

VVec j_apply(const ModuleSpec& spec, const CNum& zeta, const VVec& v);
Mat j_matrix(const ModuleSpec& spec, const CNum& zeta);

// The product defined by (zeta ._v eta) v = zeta eta v.
CNum mult_v(const ModuleSpec& spec, const CNum& zeta, const CNum& eta, const VVec& v);

enum class Side { left, right };
CNum divide(const ModuleSpec& spec, const CNum& zeta, const CNum& eta, const VVec& v, Side side);

// Evaluates a real rational function f at zeta inside the commutative
// subalgebra R1 + R Im(zeta), identified with the complex numbers.
CNum apply_complex(const CNum& zeta, const std::function<std::complex<double>(std::complex<double>)>& f);

struct CompositionReport {
  double unit_action = 0.0;      // |J(1,v) - v|
  double norm_product = 0.0;     // ||J(zeta,v)| - |zeta||v||
  double polarized = 0.0;        // <zeta u, eta v> + <eta u, zeta v> - 2<zeta,eta><u,v>
  double conj_inverse = 0.0;     // |J_conj(zeta) J_zeta v - |zeta|^2 v|
  double anticommutation = 0.0;  // |g_i g_j + g_j g_i + 2 delta_ij I|
  double skew_orthogonal = 0.0;  // |g_i^T + g_i|, |g_i^T g_i - I|

  double max_violation() const;
};

CompositionReport verify_composition(const ModuleSpec& spec, int sample_count, std::uint64_t seed);

// Largest relative residual of J_{e_i} J_{e_j} v outside span{J_{e_k} v}.
double j2_residual(const ModuleSpec& spec, int sample_count, std::uint64_t seed);
bool verify_j2(const ModuleSpec& spec, int sample_count, std::uint64_t seed);

struct AssociativityReport {
  bool associative = true;
  bool cross_check_passed = true;
  double max_variation = 0.0;  // spread of mult_v over sampled v (d <= 4)
  std::optional<double> witness_gap;  // |zeta ._v eta - zeta ._v' eta| for the recorded witness
  CNum witness_zeta, witness_eta;
  VVec witness_v, witness_v2;
};

AssociativityReport is_associative(const ModuleSpec& spec, int sample_count = 200,
                                   std::uint64_t seed = kDefaultSeed);

// Bracket of the two-step nilpotent algebra V + C': <J_z v, u> = <[v,u], z>.
// Returned as an element of C with zero real part.
CNum htype_bracket(const ModuleSpec& spec, const VVec& v, const VVec& u);

// Standard C-basis vector u_j of V, 1 <= j <= n.
VVec standard_v(const ModuleSpec& spec, int j);

}  // namespace rankone
