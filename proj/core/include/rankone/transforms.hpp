#pragma once

#include <variant>
#include <vector>

#include "rankone/cpw.hpp"
#include "rankone/glwc.hpp"

namespace rankone {

CPWPoint b_theta_apply(const ModuleSpec& spec, double theta, const CPWPoint& p);
CPWPoint a_t_apply(const ModuleSpec& spec, double t, const CPWPoint& p);
CPWPoint translate_apply(const ModuleSpec& spec, const WVec& w0, const CPWPoint& p);
CPWPoint linear_apply(const ModuleSpec& spec, const Mat& g, const CPWPoint& p);
// theta(tau_{w0}): for w0 = (t1, 0) this is (eta,u) -> ((1 - t eta)^{-1} eta, (1 - t eta)^{-1} u).
CPWPoint theta_translate_apply(const ModuleSpec& spec, const WVec& w0, const CPWPoint& p);

namespace prim {
struct KMat { Mat mat; };
struct BTheta { double theta; };
struct ATime { double t; };
struct Translate { WVec w; };
struct GLMat { Mat mat; };
struct ThetaConj {};  // the rest of the word is replaced by its theta-image
struct ThetaTranslate { WVec w; };
}  // namespace prim

using Primitive = std::variant<prim::KMat, prim::BTheta, prim::ATime, prim::Translate, prim::GLMat, prim::ThetaConj,
                               prim::ThetaTranslate>;
// Primitives apply left to right: word[0] acts first.
using TransformWord = std::vector<Primitive>;

CPWPoint apply_primitive(const ModuleSpec& spec, const Primitive& p, const CPWPoint& x);
CPWPoint apply_word(const ModuleSpec& spec, const TransformWord& word, const CPWPoint& x);
TransformWord theta_word(const ModuleSpec& spec, const TransformWord& word);
TransformWord expand_word(const ModuleSpec& spec, const TransformWord& word);  // removes ThetaConj markers
TransformWord invert_word(const ModuleSpec& spec, const TransformWord& word);
TransformWord concat(TransformWord a, const TransformWord& b);

TransformWord isometry_from_0_to(const ModuleSpec& spec, const CPWPoint& p);
TransformWord random_u_word(const ModuleSpec& spec, Rng& rng);
TransformWord random_collineation_word(const ModuleSpec& spec, Rng& rng);

struct PolarHyperplane {
  CPWPoint center;
  // Distance-like defect of q from p*: zero exactly on the hyperplane.
  double residual(const ModuleSpec& spec, const CPWPoint& q) const;
  bool contains(const ModuleSpec& spec, const CPWPoint& q, double tolerance = tol::line) const;
  std::vector<CPWPoint> sample(const ModuleSpec& spec, Rng& rng, int count) const;
};
PolarHyperplane polar(const ModuleSpec& spec, const CPWPoint& p);

struct CollineationFactors {
  TransformWord u;
  ADiag a;
  LambdaMatrix lambda;
  Mat n;
  WVec w0;  // g = u a n tau_{w0}
  double residual = 0.0;  // largest compact distance between g(x) and the recomposed word at sampled x
};
CollineationFactors factor_collineation(const ModuleSpec& spec, const TransformWord& word, int samples = 100,
                                        std::uint64_t seed = kDefaultSeed);
TransformWord recompose(const ModuleSpec& spec, const CollineationFactors& f);

// Affine C-line base + C dir, closed by the point [dir] at infinity.
struct AffineCLine {
  WVec base;
  CLine dir;
};
double conformal_check(const ModuleSpec& spec, const TransformWord& word, const AffineCLine& line, const WVec& pt);

// Projective C-line through two distinct points.
class ProjectiveLine {
 public:
  ProjectiveLine(const ModuleSpec& spec, const CPWPoint& p, const CPWPoint& q);
  double residual(const CPWPoint& x) const;

 private:
  const ModuleSpec* spec_;
  TransformWord to_origin_;
  Mat projector_;
};

// Cayley transform of the ball onto D = {Re zeta - |v|^2/4 > 0}.
WVec cayley(const ModuleSpec& spec, const WVec& p);
WVec cayley_inv(const ModuleSpec& spec, const WVec& p);
double height(const ModuleSpec& spec, const WVec& p);
CNum bmap(const ModuleSpec& spec, const VVec& v, const VVec& v2);  // <B(v,v2), zeta> = <zeta v, v2>
WVec ntilde_apply(const ModuleSpec& spec, const CNum& z, const VVec& u, const WVec& p);
WVec atilde_apply(const ModuleSpec& spec, double t, const WVec& p);

}  // namespace rankone
