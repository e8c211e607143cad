#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rankone/io.hpp"
#include "rankone/metrics.hpp"

namespace rankone {

enum class Relation { below, above, equal };

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  Relation relation = Relation::below;
  bool passed = false;
  std::string detail;
};

Check make_check(std::string name, double value, double threshold, Relation relation = Relation::below);
// Runs body; an exception becomes a failed check carrying the error text.
Check guarded(const std::string& name, const std::function<Check()>& body);

enum class Suite { algebra, j2, isometry, curvature, volume, charts, decompositions, collineations, appendix, all };
Suite parse_suite(const std::string& name);
std::string suite_name(Suite suite);

struct SuiteOptions {
  std::uint64_t seed = kDefaultSeed;
  int samples = 0;  // 0 keeps each check's own count
  std::optional<double> tolerance;  // overrides every upper-bound threshold
};

struct SuiteReport {
  std::string suite;
  std::vector<Check> checks;
  bool passed() const;
};

SuiteReport run_suite(const ModuleSpec& spec, Suite suite, const SuiteOptions& options = {});
Json report_to_json(const ModuleSpec& spec, const SuiteReport& report);

// Individual checks, with explicit sample counts and thresholds.
namespace checks {

std::vector<Check> composition(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance = 1e-12);
Check mult_v_independence(const ModuleSpec& spec, int samples, std::uint64_t seed);
Check htype_bracket_duality(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance = 1e-12);
Check j2_decision(const ModuleSpec& spec, int samples, std::uint64_t seed);

// Largest relative defect |J^T G(F x) J - scale^2 G(x)| / |G(x)| by central differences.
double pullback_defect(const ModuleSpec& source, Model source_model, const ModuleSpec& target, Model target_model,
                       const std::function<WVec(const WVec&)>& map, const WVec& x, double scale = 1.0);
Check b_theta_pullback(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance = 1e-6);
Check a_t_pullback(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance = 1e-6);
Check chart_pullback(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance = 1e-6);
Check double_cover_pullback(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance = 1e-6);
Check double_cover_antipode(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance = 1e-12);
Check group_laws(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance = 1e-10);
std::vector<Check> centralizer(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance = 1e-10);
Check metric_block_orthogonality(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance = 1e-12);

Check unit_speed(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance = 1e-9);
Check cut_locus_distance(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance = 1e-12);
std::vector<Check> distance_properties(const ModuleSpec& spec, int triples, std::uint64_t seed, double tolerance = 1e-9);

Check curvature_oracle(const ModuleSpec& spec, int pairs, std::uint64_t seed, Model model = Model::compact,
                       double tolerance = 1e-4);
Check curvature_extremes(const ModuleSpec& spec, std::uint64_t seed);
Check jacobi_profiles(const ModuleSpec& spec, int grid, std::uint64_t seed, double tolerance = 1e-10);

Check volume_agreement(const ModuleSpec& spec, double tolerance = 1e-8);
Check volume_density_profile(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance = 1e-10);

Check chart_involutions(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance = 1e-9);
Check hopf_fibers(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance = 1e-9);

Check kan_round_trip(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance = 1e-9);
Check kan_uniqueness(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance = 1e-8);
Check kak_round_trip(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance = 1e-9);
Check line_spread(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance = 1e-9);

Check theta_involution(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance = 1e-9);
Check theta_fixes_u(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance = 1e-9);
Check theta_moves_translations(const ModuleSpec& spec, int samples, std::uint64_t seed);
Check polarity_identity(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance = 1e-8);
Check polar_cut_locus(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance = 1e-9);
Check conformal_spread(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance = 1e-6);
Check factorization_round_trip(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance = 1e-8);
Check line_to_line(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance = 1e-8);

Check cayley_height(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance = 1e-12);
Check ntilde_invariance(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance = 1e-12);
Check atilde_scaling(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance = 1e-12);
Check cayley_inverse(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance = 1e-12);
Check bmap_pairing(const ModuleSpec& spec, int samples, std::uint64_t seed, double tolerance = 1e-12);
Check ball_curvature(const ModuleSpec& spec, int pairs, std::uint64_t seed, double tolerance = 1e-4);

std::vector<Check> totally_geodesic_fixture(const ModuleSpec& spec, int d0, int n0);

}  // namespace checks

}  // namespace rankone
