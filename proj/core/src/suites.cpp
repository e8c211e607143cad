#include "rankone/suites.hpp"

#include <cmath>
#include <numbers>

namespace rankone {
namespace {

constexpr double kPi = std::numbers::pi;

Check skipped(const std::string& name, const std::string& reason) {
  Check c = make_check(name, 0.0, 0.0, Relation::equal);
  c.detail = "not applicable: " + reason;
  return c;
}

WVec must_be_finite(const CPWPoint& p) {
  if (!p.is_finite()) fail(ErrorCode::chart_singularity, "image left the finite chart");
  return p.w();
}

double gap(const ModuleSpec& spec, const CPWPoint& p, const CPWPoint& q) {
  return distance(spec, Model::compact, p, q);
}

WVec ball_point(const ModuleSpec& spec, Rng& rng, double max_radius) {
  return rng.unit(spec.dim_w()) * rng.uniform(0.0, max_radius);
}

// Unit Y in CX orthogonal to X (requires d >= 2).
WVec same_line_partner(const ModuleSpec& spec, const WVec& x, Rng& rng) {
  const Mat p = cline_through(spec, x).projector();
  for (;;) {
    WVec y = p * rng.gaussian(spec.dim_w());
    y -= x.dot(y) * x;
    if (y.norm() > 1e-3) return y / y.norm();
  }
}

// Unit Y with CY orthogonal to CX (requires n >= 1 or d = 1).
WVec orthogonal_line_partner(const ModuleSpec& spec, const WVec& x, Rng& rng) {
  const Mat p = cline_through(spec, x).projector();
  for (;;) {
    WVec y = rng.gaussian(spec.dim_w());
    y -= p * y;
    if (y.norm() > 1e-3) return y / y.norm();
  }
}

bool has_orthogonal_lines(const ModuleSpec& spec) { return spec.dim_w() > spec.d; }

// Try body up to 50 times per requested sample, retrying on chart or branch failures.
template <typename Body>
double max_over_samples(int samples, Body body) {
  double worst = 0.0;
  int done = 0;
  for (int attempt = 0; done < samples; ++attempt) {
    if (attempt > 50 * samples + 50) fail(ErrorCode::numerical_degeneracy, "too many rejected samples");
    std::optional<double> value;
    try {
      value = body();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::chart_singularity) throw;
    }
    if (!value) continue;
    worst = std::max(worst, *value);
    ++done;
  }
  return worst;
}

}  // namespace

Check make_check(std::string name, double value, double threshold, Relation relation) {
  Check c;
  c.name = std::move(name);
  c.value = value;
  c.threshold = threshold;
  c.relation = relation;
  switch (relation) {
    case Relation::below: c.passed = value < threshold; break;
    case Relation::above: c.passed = value > threshold; break;
    case Relation::equal: c.passed = value == threshold; break;
  }
  return c;
}

Check guarded(const std::string& name, const std::function<Check()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    Check c;
    c.name = name;
    c.value = std::numeric_limits<double>::quiet_NaN();
    c.passed = false;
    c.detail = e.what();
    return c;
  }
}

Suite parse_suite(const std::string& name) {
  static const std::vector<std::pair<std::string, Suite>> table{
      {"algebra", Suite::algebra},         {"j2", Suite::j2},
      {"isometry", Suite::isometry},       {"curvature", Suite::curvature},
      {"volume", Suite::volume},           {"charts", Suite::charts},
      {"decompositions", Suite::decompositions}, {"collineations", Suite::collineations},
      {"appendix", Suite::appendix},       {"all", Suite::all}};
  for (const auto& [key, value] : table)
    if (key == name) return value;
  fail(ErrorCode::invalid_dimensions, "unknown suite '" + name + "'");
}

std::string suite_name(Suite suite) {
  switch (suite) {
    case Suite::algebra: return "algebra";
    case Suite::j2: return "j2";
    case Suite::isometry: return "isometry";
    case Suite::curvature: return "curvature";
    case Suite::volume: return "volume";
    case Suite::charts: return "charts";
    case Suite::decompositions: return "decompositions";
    case Suite::collineations: return "collineations";
    case Suite::appendix: return "appendix";
    case Suite::all: return "all";
  }
  return "unknown";
}

bool SuiteReport::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

namespace checks {

std::vector<Check> composition(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance) {
  const CompositionReport r = verify_composition(spec, samples, seed);
  return {make_check("unit_action", r.unit_action, tolerance), make_check("norm_product", r.norm_product, tolerance),
          make_check("polarized_norm_product", r.polarized, tolerance),
          make_check("conjugate_inverse", r.conj_inverse, tolerance),
          make_check("anticommutation", r.anticommutation, tolerance),
          make_check("skew_orthogonal", r.skew_orthogonal, tolerance)};
}

Check mult_v_independence(const ModuleSpec& spec, int samples, std::uint64_t seed) {
  if (spec.n < 1) return skipped("mult_v_independence", "V = 0");
  const AssociativityReport r = is_associative(spec, samples, seed);
  if (spec.d <= 4) {
    Check c = make_check("mult_v_independence", r.max_variation, 1e-10);
    c.passed = c.passed && r.cross_check_passed;
    return c;
  }
  Check c = make_check("mult_v_witness", r.witness_gap.value_or(0.0), 0.1, Relation::above);
  c.detail = "octonionic product depends on v";
  return c;
}

Check htype_bracket_duality(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance) {
  if (spec.vdim == 0 || spec.d < 2) return skipped("htype_bracket", "needs C' and V nonzero");
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const VVec v = rng.gaussian(spec.vdim), u = rng.gaussian(spec.vdim);
    CNum z = rng.gaussian(spec.d);
    z(0) = 0.0;
    const CNum bracket = htype_bracket(spec, v, u);
    const Mat jz = j_matrix(spec, z);
    const double duality = std::abs(bracket.dot(z) - (jz * v).dot(u));
    const double square = (jz * jz + z.squaredNorm() * Mat::Identity(spec.vdim, spec.vdim)).cwiseAbs().maxCoeff();
    worst = std::max({worst, duality / (1.0 + v.norm() * u.norm() * z.norm()), square, std::abs(bracket(0))});
  }
  return make_check("htype_bracket", worst, tolerance);
}

Check j2_decision(const ModuleSpec& spec, int samples, std::uint64_t seed) {
  const double residual = j2_residual(spec, samples, seed);
  const bool holds = verify_j2(spec, samples, seed);
  if (spec.j2_expected) {
    Check c = make_check("j2_condition", residual, 1e-9);
    c.passed = c.passed && holds;
    return c;
  }
  Check c = make_check("j2_condition_fails", residual, 1e-9, Relation::above);
  c.passed = c.passed && !holds;
  c.detail = "expected failure on a non-J2 module";
  return c;
}

double pullback_defect(const ModuleSpec& source, Model source_model, const ModuleSpec& target, Model target_model,
                       const std::function<WVec(const WVec&)>& map, const WVec& x, double scale) {
  const Eigen::Index dim = x.size();
  const double h = tol::fd_step * (1.0 + x.norm());
  const WVec y = map(x);
  Mat jac(y.size(), dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const WVec step = h * WVec::Unit(dim, i);
    jac.col(i) = (map(x + step) - map(x - step)) / (2.0 * h);
  }
  const Mat source_metric = metric_tensor(source, source_model, x);
  const Mat pulled = jac.transpose() * metric_tensor(target, target_model, y) * jac;
  return (pulled - scale * scale * source_metric).norm() / source_metric.norm();
}

Check b_theta_pullback(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance) {
  Rng rng(seed);
  const double worst = max_over_samples(samples, [&]() -> std::optional<double> {
    const WVec x = 0.7 * rng.gaussian(spec.dim_w());
    const double theta = rng.uniform(-kPi, kPi);
    const CNum denom = std::cos(theta) * unit_element(spec.d) - std::sin(theta) * zeta_part(spec, x);
    if (denom.norm() < 0.3) return std::nullopt;
    auto map = [&](const WVec& w) { return must_be_finite(b_theta_apply(spec, theta, CPWPoint::finite(w))); };
    if (map(x).norm() > 5.0) return std::nullopt;
    return pullback_defect(spec, Model::compact, spec, Model::compact, map, x);
  });
  return make_check("b_theta_isometry", worst, tolerance);
}

Check a_t_pullback(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance) {
  Rng rng(seed);
  const double worst = max_over_samples(samples, [&]() -> std::optional<double> {
    const WVec x = ball_point(spec, rng, 0.8);
    const double t = rng.uniform(-1.0, 1.0);
    auto map = [&](const WVec& w) { return must_be_finite(a_t_apply(spec, t, CPWPoint::finite(w))); };
    if (map(x).norm() > 0.9) return std::nullopt;
    return pullback_defect(spec, Model::ball, spec, Model::ball, map, x);
  });
  return make_check("a_t_isometry", worst, tolerance);
}

Check chart_pullback(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance) {
  Rng rng(seed);
  int counter = 0;
  const double worst = max_over_samples(samples, [&]() -> std::optional<double> {
    const int j = counter++ % (spec.n + 1);
    const WVec x = rng.gaussian(spec.dim_w());
    auto map = [&](const WVec& w) { return must_be_finite(phi_j(spec, j, CPWPoint::finite(w))); };
    const WVec y = map(x);
    if (y.norm() > 5.0 || zeta_part(spec, x).norm() < 0.3) return std::nullopt;
    return pullback_defect(spec, Model::compact, spec, Model::compact, map, x);
  });
  return make_check("chart_transition_isometry", worst, tolerance);
}

Check double_cover_pullback(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance) {
  if (spec.d != 1 || spec.n < 1) return skipped("double_cover_factor_two", "needs d = 1 and n >= 1");
  const ModuleSpec source = double_cover_source(spec);
  Rng rng(seed);
  const double worst = max_over_samples(samples, [&]() -> std::optional<double> {
    const double r = rng.uniform(0.0, 1.0) < 0.5 ? rng.uniform(0.0, 0.8) : rng.uniform(1.25, 3.0);
    const WVec w = r * rng.unit(source.dim_w());
    auto map = [&](const WVec& x) { return double_cover(spec, x); };
    return pullback_defect(source, Model::compact, spec, Model::compact, map, w, 2.0);
  });
  return make_check("double_cover_factor_two", worst, tolerance);
}

Check double_cover_antipode(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance) {
  if (spec.d != 1 || spec.n < 1) return skipped("double_cover_antipode", "needs d = 1 and n >= 1");
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const WVec w = rng.unit(spec.dim_w()) * rng.uniform(0.1, 0.9);
    const WVec a = double_cover(spec, w);
    const WVec b = double_cover(spec, -w / w.squaredNorm());
    worst = std::max(worst, (a - b).norm() / std::max(1.0, a.norm()));
  }
  return make_check("double_cover_antipode", worst, tolerance);
}

Check group_laws(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance) {
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const CPWPoint x = random_point(spec, rng);
    const double t1 = rng.uniform(-kPi, kPi), t2 = rng.uniform(-kPi, kPi);
    worst = std::max(worst, gap(spec, b_theta_apply(spec, t2, b_theta_apply(spec, t1, x)), b_theta_apply(spec, t1 + t2, x)));
    const double s1 = rng.uniform(-1.0, 1.0), s2 = rng.uniform(-1.0, 1.0);
    worst = std::max(worst, gap(spec, a_t_apply(spec, s2, a_t_apply(spec, s1, x)), a_t_apply(spec, s1 + s2, x)));
  }
  return make_check("one_parameter_group_laws", worst, tolerance);
}

std::vector<Check> centralizer(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance) {
  Rng rng(seed);
  std::vector<KMatrix> generators;
  for (int i = 1; i < spec.d; ++i) generators.push_back(m_alpha(spec, {basis_element(spec.d, i)}));
  double worst = 0.0;
  for (const auto& m : generators) {
    for (int s = 0; s < samples; ++s) {
      const CPWPoint x = random_point(spec, rng);
      const double theta = rng.uniform(-kPi, kPi);
      worst = std::max(worst, gap(spec, linear_apply(spec, m, b_theta_apply(spec, theta, x)),
                                  b_theta_apply(spec, theta, linear_apply(spec, m, x))));
    }
  }
  std::vector<Check> out{make_check("m_commutes_with_b_theta", worst, tolerance)};
  const KMatrix k = random_k(spec, rng);
  const WVec e0 = standard_w(spec, 0);
  if ((k * e0 - e0).norm() < 1e-6 || spec.dim_w() == 1) {
    out.push_back(skipped("k_outside_m_fails_to_commute", "sampled k fixes (1,0)"));
    return out;
  }
  double largest = 0.0;
  for (int s = 0; s < samples; ++s) {
    const CPWPoint x = random_point(spec, rng);
    largest = std::max(largest, gap(spec, linear_apply(spec, k, b_theta_apply(spec, 0.7, x)),
                                    b_theta_apply(spec, 0.7, linear_apply(spec, k, x))));
  }
  out.push_back(make_check("k_outside_m_fails_to_commute", largest, 1e-6, Relation::above));
  return out;
}

Check metric_block_orthogonality(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance) {
  if (!has_orthogonal_lines(spec)) return skipped("metric_block_orthogonality", "W is a single C-line");
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    for (Model model : {Model::compact, Model::ball}) {
      const WVec w = model == Model::ball ? ball_point(spec, rng, 0.9) : WVec(rng.gaussian(spec.dim_w()));
      if (w.norm() < 1e-6) continue;
      const Mat p = cline_through(spec, w).projector();
      const WVec x = p * rng.gaussian(spec.dim_w());
      const WVec y = orthogonal_line_partner(spec, w, rng);
      worst = std::max(worst, std::abs(metric_inner(spec, model, w, x, y)) / x.norm());
    }
  }
  return make_check("metric_block_orthogonality", worst, tolerance);
}

Check unit_speed(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance) {
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const WVec x = rng.unit(spec.dim_w());
    const double t = rng.uniform(-1.5, 1.5);
    const double c = std::cos(t);
    worst = std::max(worst, std::abs(metric_norm(spec, Model::compact, std::tan(t) * x, x / (c * c)) - 1.0));
    const double tb = rng.uniform(-3.0, 3.0);
    const double ch = std::cosh(tb);
    worst = std::max(worst, std::abs(metric_norm(spec, Model::ball, std::tanh(tb) * x, x / (ch * ch)) - 1.0));
  }
  return make_check("geodesic_unit_speed", worst, tolerance);
}

Check cut_locus_distance(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance) {
  Rng rng(seed);
  const CPWPoint origin = CPWPoint::finite(WVec::Zero(spec.dim_w()));
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const WVec x = rng.unit(spec.dim_w());
    worst = std::max(worst, std::abs(distance(spec, Model::compact, origin, infinity_of(spec, x)) - kPi / 2));
    const double t = rng.uniform(0.0, 1.5);
    worst = std::max(worst, std::abs(distance(spec, Model::compact, origin, exp0(spec, Model::compact, x, t)) - t));
  }
  return make_check("distance_from_origin", worst, tolerance);
}

std::vector<Check> distance_properties(const ModuleSpec& spec, int triples, std::uint64_t seed, double tolerance) {
  Rng rng(seed);
  double symmetry = 0.0, triangle = 0.0, ball_symmetry = 0.0, ball_triangle = 0.0, self = 0.0;
  for (int s = 0; s < triples; ++s) {
    const CPWPoint p = random_point(spec, rng), q = random_point(spec, rng), r = random_point(spec, rng);
    const double pq = distance(spec, Model::compact, p, q), qp = distance(spec, Model::compact, q, p);
    const double qr = distance(spec, Model::compact, q, r), pr = distance(spec, Model::compact, p, r);
    symmetry = std::max(symmetry, std::abs(pq - qp));
    triangle = std::max(triangle, pr - pq - qr);
    self = std::max(self, distance(spec, Model::compact, p, p));
    const CPWPoint bp = CPWPoint::finite(ball_point(spec, rng, 0.9));
    const CPWPoint bq = CPWPoint::finite(ball_point(spec, rng, 0.9));
    const CPWPoint br = CPWPoint::finite(ball_point(spec, rng, 0.9));
    const double bpq = distance(spec, Model::ball, bp, bq), bqp = distance(spec, Model::ball, bq, bp);
    ball_symmetry = std::max(ball_symmetry, std::abs(bpq - bqp));
    ball_triangle =
        std::max(ball_triangle, distance(spec, Model::ball, bp, br) - bpq - distance(spec, Model::ball, bq, br));
  }
  return {make_check("distance_symmetry", symmetry, tolerance), make_check("distance_triangle", triangle, tolerance),
          make_check("distance_to_self", self, tolerance), make_check("ball_distance_symmetry", ball_symmetry, tolerance),
          make_check("ball_distance_triangle", ball_triangle, tolerance)};
}

Check curvature_oracle(const ModuleSpec& spec, int pairs, std::uint64_t seed, Model model, double tolerance) {
  if (spec.dim_w() < 2) return skipped("curvature_oracle", "dim W < 2");
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < pairs; ++s) {
    const auto [x, y] = random_orthonormal_pair(spec, rng);
    const double exact = sectional_curvature(spec, x, y, model);
    worst = std::max(worst, std::abs(curvature_extrapolated(spec, x, y, 0.02, model) - exact));
  }
  return make_check(model == Model::compact ? "curvature_oracle" : "ball_curvature_oracle", worst, tolerance);
}

Check curvature_extremes(const ModuleSpec& spec, std::uint64_t seed) {
  if (spec.dim_w() < 2) return skipped("curvature_extremes", "dim W < 2");
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < 20; ++s) {
    const WVec x = rng.unit(spec.dim_w());
    if (spec.d >= 2) worst = std::max(worst, std::abs(sectional_curvature(spec, x, same_line_partner(spec, x, rng)) - 4.0));
    if (has_orthogonal_lines(spec))
      worst = std::max(worst, std::abs(sectional_curvature(spec, x, orthogonal_line_partner(spec, x, rng)) - 1.0));
  }
  return make_check("curvature_extremes", worst, 1e-12);
}

Check jacobi_profiles(const ModuleSpec& spec, int grid, std::uint64_t seed, double tolerance) {
  if (spec.dim_w() < 2) return skipped("jacobi_profiles", "dim W < 2");
  Rng rng(seed);
  double worst = 0.0;
  const WVec x = rng.unit(spec.dim_w());
  for (int k = 0; k < grid; ++k) {
    const double t = k * (kPi / 2) / grid;
    if (spec.d >= 2) {
      const WVec y = same_line_partner(spec, x, rng);
      worst = std::max(worst, std::abs(jacobi_profile(spec, x, y, t) - std::sin(2.0 * t) / 2.0));
    }
    if (has_orthogonal_lines(spec)) {
      const WVec y = orthogonal_line_partner(spec, x, rng);
      worst = std::max(worst, std::abs(jacobi_profile(spec, x, y, t) - std::sin(t)));
    }
  }
  return make_check("jacobi_profiles", worst, tolerance);
}

Check volume_agreement(const ModuleSpec& spec, double tolerance) {
  const double closed = volume(spec);
  const double numeric = volume_quadrature(spec);
  Check c = make_check("volume_closed_vs_quadrature", std::abs(closed - numeric) / closed, tolerance);
  c.detail = "closed form " + std::to_string(closed);
  return c;
}

Check volume_density_profile(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance) {
  Rng rng(seed);
  const double exponent = -(spec.n + 2) * spec.d / 2.0;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const WVec w = rng.gaussian(spec.dim_w());
    const double expected = std::pow(1.0 + w.squaredNorm(), exponent);
    worst = std::max(worst, std::abs(volume_density(spec, w) - expected) / expected);
  }
  return make_check("volume_density", worst, tolerance);
}

Check chart_involutions(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance) {
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const CPWPoint x = random_point(spec, rng, 0.3);
    for (int j = 0; j <= spec.n + 1; ++j) worst = std::max(worst, gap(spec, phi_j(spec, j, phi_j(spec, j, x)), x));
    const int cover = chart_cover_index(spec, x);
    if (!phi_j(spec, cover, x).is_finite()) fail(ErrorCode::validation, "chart cover index gives an infinite image");
  }
  return make_check("chart_involutions", worst, tolerance);
}

Check hopf_fibers(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance) {
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const WVec w = rng.unit(spec.dim_w());
    const Mat frame = cline_through(spec, w).frame();
    WVec other = frame.transpose() * rng.gaussian(spec.d);
    other /= other.norm();
    worst = std::max(worst, projector_distance(hopf(spec, w).line().projector(), hopf(spec, other).line().projector()));
  }
  return make_check("hopf_fibers", worst, tolerance);
}

Check kan_round_trip(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance) {
  if (spec.n < 1) return skipped("kan_round_trip", "needs n >= 1");
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) worst = std::max(worst, iwasawa(spec, random_glwc(spec, rng)).residual);
  return make_check("kan_round_trip", worst, tolerance);
}

Check kan_uniqueness(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance) {
  if (spec.n < 1) return skipped("kan_uniqueness", "needs n >= 1");
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const KMatrix k = random_k(spec, rng);
    const ADiag a = random_adiag(spec, rng);
    const LambdaMatrix lambda = random_lambda(spec, rng);
    const Iwasawa f = iwasawa(spec, k * a.matrix(spec) * n_from_lambda(spec, lambda));
    worst = std::max({worst, (f.a.t - a.t).cwiseAbs().maxCoeff(), f.lambda.max_abs_diff(lambda), op_norm(f.k - k)});
  }
  return make_check("kan_uniqueness", worst, tolerance);
}

Check kak_round_trip(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance) {
  if (spec.n < 1) return skipped("kak_round_trip", "needs n >= 1");
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) worst = std::max(worst, cartan(spec, random_glwc(spec, rng)).residual);
  return make_check("kak_round_trip", worst, tolerance);
}

Check line_spread(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance) {
  if (spec.n < 1) return skipped("line_restriction_spread", "needs n >= 1");
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s)
    worst = std::max(worst, line_restriction_spread(spec, random_glwc(spec, rng), rng.unit(spec.dim_w())));
  return make_check("line_restriction_spread", worst, tolerance);
}

Check theta_involution(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance) {
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const TransformWord word = random_collineation_word(spec, rng);
    const TransformWord twice = theta_word(spec, theta_word(spec, word));
    TransformWord marked{prim::ThetaConj{}, prim::ThetaConj{}};
    marked = concat(marked, word);
    for (int i = 0; i < 5; ++i) {
      const CPWPoint x = random_point(spec, rng);
      const CPWPoint expected = apply_word(spec, word, x);
      worst = std::max({worst, gap(spec, apply_word(spec, twice, x), expected), gap(spec, apply_word(spec, marked, x), expected)});
    }
  }
  return make_check("theta_involution", worst, tolerance);
}

Check theta_fixes_u(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance) {
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    TransformWord word = random_u_word(spec, rng);
    word.push_back(prim::GLMat{random_k(spec, rng)});
    const TransformWord image = theta_word(spec, word);
    for (int i = 0; i < 5; ++i) {
      const CPWPoint x = random_point(spec, rng);
      worst = std::max(worst, gap(spec, apply_word(spec, image, x), apply_word(spec, word, x)));
    }
  }
  return make_check("theta_fixes_isometries", worst, tolerance);
}

Check theta_moves_translations(const ModuleSpec& spec, int samples, std::uint64_t seed) {
  Rng rng(seed);
  double smallest = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    const WVec w0 = rng.gaussian(spec.dim_w());
    const TransformWord word{prim::Translate{w0}};
    const TransformWord image = theta_word(spec, word);
    double largest = 0.0;
    for (int i = 0; i < 10; ++i) {
      const CPWPoint x = random_point(spec, rng);
      largest = std::max(largest, gap(spec, apply_word(spec, image, x), apply_word(spec, word, x)));
    }
    smallest = std::min(smallest, largest);
  }
  return make_check("theta_moves_translations", smallest, 1e-3, Relation::above);
}

Check polarity_identity(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance) {
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const TransformWord g = random_collineation_word(spec, rng);
    const CPWPoint p = random_point(spec, rng);
    const PolarHyperplane target = polar(spec, apply_word(spec, theta_word(spec, g), p));
    for (const auto& q : polar(spec, p).sample(spec, rng, 5)) worst = std::max(worst, target.residual(spec, apply_word(spec, g, q)));
  }
  return make_check("polarity_identity", worst, tolerance);
}

Check polar_cut_locus(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance) {
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const CPWPoint p = random_point(spec, rng);
    const PolarHyperplane hp = polar(spec, p);
    for (const auto& q : hp.sample(spec, rng, 10)) {
      worst = std::max({worst, std::abs(distance(spec, Model::compact, p, q) - kPi / 2), hp.residual(spec, q)});
    }
  }
  return make_check("polar_is_cut_locus", worst, tolerance);
}

Check conformal_spread(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance) {
  if (spec.d < 2) return skipped("conformal_spread", "needs d >= 2");
  Rng rng(seed);
  const double worst = max_over_samples(samples, [&]() -> std::optional<double> {
    const TransformWord word = random_collineation_word(spec, rng);
    AffineCLine line{rng.gaussian(spec.dim_w()), cline_through(spec, rng.unit(spec.dim_w()))};
    const WVec pt = line.base + line.dir.frame().transpose() * rng.gaussian(spec.d);
    return conformal_check(spec, word, line, pt);
  });
  return make_check("conformal_spread", worst, tolerance);
}

Check factorization_round_trip(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance) {
  if (spec.n < 1) return skipped("factorization_round_trip", "needs n >= 1");
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const TransformWord word = random_collineation_word(spec, rng);
    worst = std::max(worst, factor_collineation(spec, word, 100, seed + static_cast<std::uint64_t>(s)).residual);
  }
  return make_check("factorization_round_trip", worst, tolerance);
}

Check line_to_line(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance) {
  if (spec.n < 1) return skipped("line_to_line", "W is a single C-line");
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const TransformWord word = random_collineation_word(spec, rng);
    const WVec base = rng.gaussian(spec.dim_w());
    const CLine dir = cline_through(spec, rng.unit(spec.dim_w()));
    std::vector<CPWPoint> images;
    for (int i = 0; i < 20; ++i)
      images.push_back(apply_word(spec, word, CPWPoint::finite(base + dir.frame().transpose() * rng.gaussian(spec.d))));
    images.push_back(apply_word(spec, word, CPWPoint::infinity(dir)));
    const ProjectiveLine line(spec, images[0], images[1]);
    for (std::size_t i = 2; i < images.size(); ++i) worst = std::max(worst, line.residual(images[i]));
  }
  return make_check("lines_map_to_lines", worst, tolerance);
}

Check cayley_height(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance) {
  Rng rng(seed);
  double worst = 0.0;
  int done = 0;
  while (done < samples) {
    const WVec p = ball_point(spec, rng, 0.95);
    const CNum gap1 = unit_element(spec.d) - zeta_part(spec, p);
    if (gap1.norm() < 0.05) continue;
    const double expected = (1.0 - p.squaredNorm()) / gap1.squaredNorm();
    worst = std::max(worst, std::abs(height(spec, cayley(spec, p)) - expected) / std::max(1.0, expected));
    ++done;
  }
  return make_check("cayley_height_identity", worst, tolerance);
}

Check ntilde_invariance(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance) {
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const WVec p = cayley(spec, ball_point(spec, rng, 0.5));
    CNum z = rng.gaussian(spec.d);
    z(0) = 0.0;
    const VVec u = rng.gaussian(spec.vdim);
    const double before = height(spec, p);
    worst = std::max(worst, std::abs(height(spec, ntilde_apply(spec, z, u, p)) - before) / std::max(1.0, std::abs(before)));
  }
  return make_check("ntilde_preserves_height", worst, tolerance);
}

Check atilde_scaling(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance) {
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const WVec p = cayley(spec, ball_point(spec, rng, 0.5));
    const double t = rng.uniform(-1.0, 1.0);
    const double expected = std::exp(2.0 * t) * height(spec, p);
    worst = std::max(worst, std::abs(height(spec, atilde_apply(spec, t, p)) - expected) / std::max(1.0, std::abs(expected)));
  }
  return make_check("atilde_scales_height", worst, tolerance);
}

Check cayley_inverse(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance) {
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const WVec p = ball_point(spec, rng, 0.9);
    worst = std::max(worst, (cayley_inv(spec, cayley(spec, p)) - p).norm());
  }
  return make_check("cayley_inverse", worst, tolerance);
}

Check bmap_pairing(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance) {
  if (spec.vdim == 0) return skipped("bmap_pairing", "V = 0");
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const VVec v = rng.gaussian(spec.vdim), v2 = rng.gaussian(spec.vdim), u = rng.gaussian(spec.vdim);
    const CNum b = bmap(spec, v, u);
    const double scale = 1.0 + v.norm() * u.norm();
    worst = std::max(worst, std::abs(b(0) - v.dot(u)) / scale);
    const CNum linear = bmap(spec, v + 2.0 * v2, u) - b - 2.0 * bmap(spec, v2, u);
    worst = std::max(worst, linear.norm() / (1.0 + (v.norm() + v2.norm()) * u.norm()));
  }
  return make_check("bmap_pairing", worst, tolerance);
}

Check ball_curvature(const ModuleSpec& spec, int pairs, std::uint64_t seed, double tolerance) {
  if (spec.dim_w() < 2) return skipped("ball_curvature_negated", "dim W < 2");
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < pairs; ++s) {
    const auto [x, y] = random_orthonormal_pair(spec, rng);
    const double compact = sectional_curvature(spec, x, y, Model::compact);
    worst = std::max(worst, std::abs(curvature_extrapolated(spec, x, y, 0.02, Model::ball) + compact));
  }
  return make_check("ball_curvature_negated", worst, tolerance);
}

std::vector<Check> totally_geodesic_fixture(const ModuleSpec& spec, int d0, int n0) {
  const std::string tag = "(" + std::to_string(d0) + "," + std::to_string(n0) + ")";
  const TotallyGeodesicSpec tg = totally_geodesic(spec, d0, n0);
  const Eigen::Index dim = spec.dim_w();
  std::vector<Check> out;
  double involution = 0.0;
  int members = 0;
  for (const auto& r : tg.involutions) {
    involution = std::max(involution, (r * r - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff());
    members += is_k_member(spec, r) ? 1 : 0;
  }
  out.push_back(make_check("involutions_in_k " + tag, members, static_cast<double>(tg.involutions.size()), Relation::equal));
  out.push_back(make_check("involutions_square_to_identity " + tag, involution, 1e-10));
  const Mat fixed_w1 = common_fixed_space({tg.involutions.front()}, dim);
  out.push_back(make_check("first_fixed_dimension " + tag, static_cast<double>(fixed_w1.cols()),
                           static_cast<double>(spec.d * (n0 + 1)), Relation::equal));
  const Mat fixed = common_fixed_space(tg.involutions, dim);
  out.push_back(make_check("common_fixed_dimension " + tag, static_cast<double>(fixed.cols()),
                           static_cast<double>(d0 * (n0 + 1)), Relation::equal));
  const double span_gap = fixed.cols() == tg.w0_basis.cols()
                              ? (fixed * fixed.transpose() - tg.w0_basis * tg.w0_basis.transpose()).norm()
                              : std::numeric_limits<double>::infinity();
  out.push_back(make_check("common_fixed_space_is_w0 " + tag, span_gap, 1e-8));
  return out;
}

}  // namespace checks

SuiteReport run_suite(const ModuleSpec& spec, Suite suite, const SuiteOptions& options) {
  SuiteReport report;
  report.suite = suite_name(suite);
  if (suite == Suite::all) {
    const std::vector<Suite> order = spec.j2_expected
                                         ? std::vector<Suite>{Suite::algebra, Suite::j2, Suite::isometry, Suite::curvature,
                                                              Suite::volume, Suite::charts, Suite::decompositions,
                                                              Suite::collineations, Suite::appendix}
                                         : std::vector<Suite>{Suite::algebra, Suite::j2};
    for (Suite part : order) {
      SuiteReport sub = run_suite(spec, part, options);
      for (auto& c : sub.checks) {
        c.name = sub.suite + "." + c.name;
        report.checks.push_back(std::move(c));
      }
    }
    return report;
  }
  if (!spec.j2_expected && suite != Suite::algebra && suite != Suite::j2)
    fail(ErrorCode::domain, "suite '" + report.suite + "' needs a J2 module");

  auto count = [&](int fallback) { return options.samples > 0 ? options.samples : fallback; };
  std::uint64_t salt = 0;
  auto seed = [&]() { return options.seed + 7919 * ++salt; };
  auto add = [&](const std::string& name, const std::function<Check()>& body) {
    report.checks.push_back(guarded(name, body));
  };
  auto add_all = [&](const std::string& name, const std::function<std::vector<Check>()>& body) {
    try {
      for (auto& c : body()) report.checks.push_back(std::move(c));
    } catch (const std::exception& e) {
      report.checks.push_back(guarded(name, [&]() -> Check { throw Error(ErrorCode::validation, e.what()); }));
    }
  };

  using namespace checks;
  switch (suite) {
    case Suite::algebra: {
      const auto s1 = seed(), s2 = seed(), s3 = seed();
      add_all("composition", [&] { return composition(spec, count(1000), s1); });
      if (spec.j2_expected) add("mult_v_independence", [&] { return mult_v_independence(spec, count(200), s2); });
      add("htype_bracket", [&] { return htype_bracket_duality(spec, count(200), s3); });
      break;
    }
    case Suite::j2: {
      const auto s1 = seed();
      add("j2_condition", [&] { return j2_decision(spec, count(200), s1); });
      break;
    }
    case Suite::isometry: {
      const auto s1 = seed(), s2 = seed(), s3 = seed(), s4 = seed(), s5 = seed(), s6 = seed(), s7 = seed(), s8 = seed(),
                 s9 = seed(), s10 = seed();
      add("b_theta_isometry", [&] { return b_theta_pullback(spec, count(200), s1); });
      add("a_t_isometry", [&] { return a_t_pullback(spec, count(200), s2); });
      add("double_cover_factor_two", [&] { return double_cover_pullback(spec, count(200), s3); });
      add("double_cover_antipode", [&] { return double_cover_antipode(spec, count(100), s4); });
      add("one_parameter_group_laws", [&] { return group_laws(spec, count(50), s5); });
      add_all("centralizer", [&] { return centralizer(spec, count(20), s6); });
      add("metric_block_orthogonality", [&] { return metric_block_orthogonality(spec, count(50), s7); });
      add("geodesic_unit_speed", [&] { return unit_speed(spec, count(50), s8); });
      add("distance_from_origin", [&] { return cut_locus_distance(spec, count(50), s9); });
      add_all("distance_properties", [&] { return distance_properties(spec, count(200), s10); });
      break;
    }
    case Suite::curvature: {
      const auto s1 = seed(), s2 = seed(), s3 = seed(), s4 = seed();
      add("curvature_oracle", [&] { return curvature_oracle(spec, count(50), s1); });
      add("curvature_extremes", [&] { return curvature_extremes(spec, s2); });
      add("jacobi_profiles", [&] { return jacobi_profiles(spec, count(50), s3); });
      add("ball_curvature_negated", [&] { return ball_curvature(spec, count(20), s4); });
      break;
    }
    case Suite::volume: {
      const auto s1 = seed();
      add("volume_closed_vs_quadrature", [&] { return volume_agreement(spec); });
      add("volume_density", [&] { return volume_density_profile(spec, count(50), s1); });
      break;
    }
    case Suite::charts: {
      const auto s1 = seed(), s2 = seed(), s3 = seed();
      add("chart_transition_isometry", [&] { return chart_pullback(spec, count(200), s1); });
      add("chart_involutions", [&] { return chart_involutions(spec, count(50), s2); });
      add("hopf_fibers", [&] { return hopf_fibers(spec, count(50), s3); });
      break;
    }
    case Suite::decompositions: {
      const auto s1 = seed(), s2 = seed(), s3 = seed(), s4 = seed();
      add("kan_round_trip", [&] { return kan_round_trip(spec, count(100), s1); });
      add("kan_uniqueness", [&] { return kan_uniqueness(spec, count(100), s2); });
      add("kak_round_trip", [&] { return kak_round_trip(spec, count(100), s3); });
      add("line_restriction_spread", [&] { return line_spread(spec, count(100), s4); });
      break;
    }
    case Suite::collineations: {
      const auto s1 = seed(), s2 = seed(), s3 = seed(), s4 = seed(), s5 = seed(), s6 = seed(), s7 = seed(), s8 = seed();
      add("theta_involution", [&] { return theta_involution(spec, count(20), s1); });
      add("theta_fixes_isometries", [&] { return theta_fixes_u(spec, count(20), s2); });
      add("theta_moves_translations", [&] { return theta_moves_translations(spec, count(10), s3); });
      add("polarity_identity", [&] { return polarity_identity(spec, count(20), s4); });
      add("polar_is_cut_locus", [&] { return polar_cut_locus(spec, count(20), s5); });
      add("conformal_spread", [&] { return conformal_spread(spec, count(50), s6); });
      add("factorization_round_trip", [&] { return factorization_round_trip(spec, count(5), s7); });
      add("lines_map_to_lines", [&] { return line_to_line(spec, count(20), s8); });
      break;
    }
    case Suite::appendix: {
      const auto s1 = seed(), s2 = seed(), s3 = seed(), s4 = seed(), s5 = seed(), s6 = seed();
      add("cayley_height_identity", [&] { return cayley_height(spec, count(100), s1); });
      add("ntilde_preserves_height", [&] { return ntilde_invariance(spec, count(100), s2); });
      add("atilde_scales_height", [&] { return atilde_scaling(spec, count(100), s3); });
      add("cayley_inverse", [&] { return cayley_inverse(spec, count(100), s4); });
      add("bmap_pairing", [&] { return bmap_pairing(spec, count(50), s5); });
      add("ball_curvature_negated", [&] { return ball_curvature(spec, count(10), s6); });
      break;
    }
    case Suite::all: break;
  }

  if (options.tolerance) {
    for (auto& c : report.checks) {
      if (c.relation != Relation::below || c.detail.rfind("not applicable", 0) == 0 || std::isnan(c.value)) continue;
      c.threshold = *options.tolerance;
      c.passed = c.value < c.threshold;
    }
  }
  return report;
}

Json report_to_json(const ModuleSpec& spec, const SuiteReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    const char* relation = c.relation == Relation::below ? "<" : c.relation == Relation::above ? ">" : "==";
    Json entry{{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"relation", relation}, {"passed", c.passed}};
    if (!c.detail.empty()) entry["detail"] = c.detail;
    checks.push_back(entry);
  }
  return Json{{"suite", report.suite},
              {"space", {{"d", spec.d}, {"n", spec.n}, {"j2_expected", spec.j2_expected}}},
              {"checks", checks},
              {"passed", report.passed()}};
}

}  // namespace rankone
