#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "rankone/io.hpp"
#include "rankone/suites.hpp"

using namespace rankone;

namespace {

enum Exit { kPass = 0, kCheckFailed = 1, kUsage = 2, kSchema = 3, kDomain = 4 };

struct Common {
  int d = 2;
  int n = 1;
  std::string fixture;
  std::uint64_t seed = kDefaultSeed;
  std::string format = "json";
  std::string in;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool needs_input) {
  cmd->add_option("--d", c.d, "dimension of C")->capture_default_str();
  cmd->add_option("--n", c.n, "number of C-lines in V")->capture_default_str();
  cmd->add_option("--fixture", c.fixture, "non-J2 counterexample instead of (d,n)")->check(CLI::IsMember({"d3", "d4_mixed"}));
  cmd->add_option("--seed", c.seed, "random seed")->capture_default_str();
  cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  auto* in = cmd->add_option("--in", c.in, "input JSON file ('-' for stdin)");
  if (needs_input) in->required();
  cmd->add_option("--out", c.out, "output file (default stdout)");
}

ModuleSpec build_space(const Common& c) {
  if (c.fixture == "d3") return make_non_j2_module(NonJ2Kind::d3);
  if (c.fixture == "d4_mixed") return make_non_j2_module(NonJ2Kind::d4_mixed);
  return make_module(c.d, c.n);
}

std::string space_name(const ModuleSpec& spec) {
  if (!spec.j2_expected) return "non-J2 module";
  if (spec.n == 0) return "S^" + std::to_string(spec.d);
  const std::string dim = std::to_string(spec.n + 1);
  switch (spec.d) {
    case 1: return "RP^" + dim;
    case 2: return "CP^" + dim;
    case 4: return "HP^" + dim;
    default: return "OP^2";
  }
}

Json read_input(const std::string& path) {
  std::stringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream file(path);
    if (!file) fail(ErrorCode::schema, "cannot read '" + path + "'");
    buf << file.rdbuf();
  }
  try {
    return Json::parse(buf.str());
  } catch (const Json::exception& e) {
    fail(ErrorCode::schema, std::string("invalid JSON: ") + e.what());
  }
}

void write_output(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream file(c.out);
  if (!file) fail(ErrorCode::domain, "cannot write '" + c.out + "'");
  file << text;
  if (!text.empty() && text.back() != '\n') file << '\n';
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<CPWPoint> read_points(const ModuleSpec& spec, const Json& input) {
  std::vector<CPWPoint> out;
  if (input.contains("points")) {
    if (!input.at("points").is_array()) fail(ErrorCode::schema, "'points' must be an array");
    for (const auto& p : input.at("points")) out.push_back(point_from_json(spec, p));
  } else if (input.contains("point")) {
    out.push_back(point_from_json(spec, input.at("point")));
  } else {
    fail(ErrorCode::schema, "input needs 'point' or 'points'");
  }
  return out;
}

int cmd_info(const Common& c) {
  const ModuleSpec spec = build_space(c);
  Json out{{"name", space_name(spec)},
           {"d", spec.d},
           {"n", spec.n},
           {"dim_v", spec.dim_v()},
           {"dim_w", spec.dim_w()},
           {"j2", spec.j2_expected}};
  if (spec.j2_expected) {
    out["volume"] = volume(spec);
    Json range = Json::array();
    if (spec.dim_w() >= 2) range = Json::array({spec.dim_w() > spec.d ? 1.0 : 4.0, spec.d >= 2 ? 4.0 : 1.0});
    out["curvature_range"] = range;
  }
  write_output(c, dump_canonical(out));
  return kPass;
}

int cmd_verify(const Common& c, const std::string& suite, std::optional<double> tolerance, int samples) {
  const ModuleSpec spec = build_space(c);
  SuiteOptions options;
  options.seed = c.seed;
  options.samples = samples;
  options.tolerance = tolerance;
  const SuiteReport report = run_suite(spec, parse_suite(suite), options);
  if (c.format == "csv") {
    std::string text = "name,value,threshold,relation,passed\n";
    for (const auto& k : report.checks) {
      const char* rel = k.relation == Relation::below ? "<" : k.relation == Relation::above ? ">" : "==";
      text += k.name + "," + num(k.value) + "," + num(k.threshold) + "," + rel + "," + (k.passed ? "true" : "false") + "\n";
    }
    write_output(c, text);
  } else {
    write_output(c, dump_canonical(report_to_json(spec, report)));
  }
  return report.passed() ? kPass : kCheckFailed;
}

int cmd_apply(const Common& c) {
  const ModuleSpec spec = build_space(c);
  const Json input = read_input(c.in);
  if (!input.is_object() || !input.contains("word")) fail(ErrorCode::schema, "input needs a 'word'");
  const TransformWord word = word_from_json(spec, input.at("word"));
  Json images = Json::array();
  for (const auto& p : read_points(spec, input)) images.push_back(point_to_json(spec, apply_word(spec, word, p)));
  write_output(c, dump_canonical(Json{{"points", images}}));
  return kPass;
}

int cmd_distance(const Common& c, const std::string& model_name) {
  const ModuleSpec spec = build_space(c);
  const Model model = model_name == "ball" ? Model::ball : Model::compact;
  const Json input = read_input(c.in);
  std::vector<std::pair<CPWPoint, CPWPoint>> pairs;
  if (input.contains("pairs")) {
    for (const auto& pq : input.at("pairs")) {
      if (!pq.is_array() || pq.size() != 2) fail(ErrorCode::schema, "each pair must hold two points");
      pairs.emplace_back(point_from_json(spec, pq[0]), point_from_json(spec, pq[1]));
    }
  } else if (input.contains("p") && input.contains("q")) {
    pairs.emplace_back(point_from_json(spec, input.at("p")), point_from_json(spec, input.at("q")));
  } else {
    fail(ErrorCode::schema, "input needs 'p' and 'q' or 'pairs'");
  }
  Json values = Json::array();
  for (const auto& [p, q] : pairs) values.push_back(distance(spec, model, p, q));
  if (c.format == "csv") {
    std::string text = "index,distance\n";
    for (std::size_t i = 0; i < values.size(); ++i) text += std::to_string(i) + "," + num(values[i].get<double>()) + "\n";
    write_output(c, text);
  } else {
    write_output(c, dump_canonical(Json{{"distances", values}}));
  }
  return kPass;
}

int cmd_decompose(const Common& c, const std::string& kind, bool random) {
  const ModuleSpec spec = build_space(c);
  Mat g;
  if (random) {
    Rng rng(c.seed);
    g = random_glwc(spec, rng);
  } else {
    if (c.in.empty()) fail(ErrorCode::schema, "decompose needs --in or --random");
    const Json input = read_input(c.in);
    g = mat_from_json(input.is_object() && input.contains("mat") ? input.at("mat") : input, spec.dim_w(), spec.dim_w());
    if (!is_glwc(spec, g)) fail(ErrorCode::not_glwc, "matrix does not preserve C-lines");
  }
  Json out = kind == "kak" ? cartan_to_json(cartan(spec, g)) : iwasawa_to_json(iwasawa(spec, g));
  out["input"] = mat_to_json(g);
  write_output(c, dump_canonical(out));
  return kPass;
}

int cmd_cayley(const Common& c, bool inverse) {
  const ModuleSpec spec = build_space(c);
  const Json input = read_input(c.in);
  Json images = Json::array();
  for (const auto& p : read_points(spec, input)) {
    if (!p.is_finite()) fail(ErrorCode::domain, "the Cayley transform acts on finite points");
    const WVec image = inverse ? cayley_inv(spec, p.w()) : cayley(spec, p.w());
    Json entry{{"zeta", vec_to_json(zeta_part(spec, image))}, {"v", vec_to_json(v_part(spec, image))}};
    if (!inverse) entry["height"] = height(spec, image);
    images.push_back(entry);
  }
  write_output(c, dump_canonical(images.size() == 1 ? images[0] : Json{{"points", images}}));
  return kPass;
}

int cmd_report(const Common& c, const std::string& table, int samples) {
  const ModuleSpec spec = build_space(c);
  Rng rng(c.seed);
  const int count = samples > 0 ? samples : 20;
  if (table == "jacobi") {
    const WVec x = rng.unit(spec.dim_w());
    const bool z_type = spec.d >= 2;
    const bool v_type = spec.dim_w() > spec.d;
    WVec yz, yv;
    if (z_type) {
      const Mat p = cline_through(spec, x).projector();
      yz = p * rng.gaussian(spec.dim_w());
      yz -= x.dot(yz) * x;
      yz.normalize();
    }
    if (v_type) {
      yv = rng.gaussian(spec.dim_w());
      yv -= cline_through(spec, x).projector() * yv;
      yv.normalize();
    }
    Json rows = Json::array();
    std::string text = "t,z_type,v_type\n";
    for (int k = 0; k < count; ++k) {
      const double t = k * (std::numbers::pi / 2) / count;
      const double z = z_type ? jacobi_profile(spec, x, yz, t) : std::nan("");
      const double v = v_type ? jacobi_profile(spec, x, yv, t) : std::nan("");
      text += num(t) + "," + (z_type ? num(z) : "") + "," + (v_type ? num(v) : "") + "\n";
      rows.push_back(Json{{"t", t}, {"z_type", z}, {"v_type", v}});
    }
    write_output(c, c.format == "csv" ? text : dump_canonical(Json{{"space", {{"d", spec.d}, {"n", spec.n}}}, {"jacobi", rows}}));
    return kPass;
  }
  const double closed = volume(spec), numeric = volume_quadrature(spec);
  Json samples_json = Json::array();
  std::string text = "index,p,sectional,circle_estimate\n";
  if (spec.dim_w() >= 2) {
    for (int i = 0; i < count; ++i) {
      const auto [x, y] = random_orthonormal_pair(spec, rng);
      const double p = (cline_through(spec, x).projector() * y).norm();
      const double sigma = sectional_curvature(spec, x, y);
      const double estimate = curvature_extrapolated(spec, x, y, 0.02);
      samples_json.push_back(Json{{"p", p}, {"sectional", sigma}, {"circle_estimate", estimate}});
      text += std::to_string(i) + "," + num(p) + "," + num(sigma) + "," + num(estimate) + "\n";
    }
  }
  if (c.format == "csv") {
    write_output(c, text);
  } else {
    write_output(c, dump_canonical(Json{{"space", {{"d", spec.d}, {"n", spec.n}, {"name", space_name(spec)}}},
                                        {"volume", {{"closed_form", closed}, {"quadrature", numeric},
                                                    {"relative_error", std::abs(closed - numeric) / closed}}},
                                        {"curvature_samples", samples_json}}));
  }
  return kPass;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_dimensions: return kUsage;
    case ErrorCode::schema: return kSchema;
    default: return kDomain;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rank-one symmetric spaces from J2 C-modules"};
  app.require_subcommand(1);

  Common common;
  std::string suite = "all", kind = "kan", model = "compact", table = "curvature";
  std::optional<double> tolerance;
  int samples = 0;
  bool random = false, inverse = false;

  auto* info = app.add_subcommand("info", "dimensions, name and volume of a space");
  add_common(info, common, false);
  auto* verify = app.add_subcommand("verify", "run an invariant suite");
  add_common(verify, common, false);
  verify->add_option("--suite", suite)
      ->check(CLI::IsMember({"algebra", "j2", "isometry", "curvature", "volume", "charts", "decompositions",
                             "collineations", "appendix", "all"}))
      ->capture_default_str();
  verify->add_option("--tol", tolerance, "override every upper-bound threshold");
  verify->add_option("--samples", samples, "samples per check (0 keeps defaults)");
  auto* apply = app.add_subcommand("apply", "apply a transformation word to points");
  add_common(apply, common, true);
  auto* dist = app.add_subcommand("distance", "geodesic distance between points");
  add_common(dist, common, true);
  dist->add_option("--model", model)->check(CLI::IsMember({"compact", "ball"}))->capture_default_str();
  auto* decompose = app.add_subcommand("decompose", "KAN or KAK decomposition of a GL(W,C) matrix");
  add_common(decompose, common, false);
  decompose->add_option("--kind", kind)->check(CLI::IsMember({"kan", "kak"}))->capture_default_str();
  decompose->add_flag("--random", random, "decompose a seeded random element");
  auto* cayley_cmd = app.add_subcommand("cayley", "Cayley transform of ball points");
  add_common(cayley_cmd, common, true);
  cayley_cmd->add_flag("--inverse", inverse, "apply the inverse transform");
  auto* report = app.add_subcommand("report", "volume and curvature tables");
  add_common(report, common, false);
  report->add_option("--table", table)->check(CLI::IsMember({"curvature", "jacobi"}))->capture_default_str();
  report->add_option("--samples", samples, "rows in the table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }

  try {
    if (*info) return cmd_info(common);
    if (*verify) return cmd_verify(common, suite, tolerance, samples);
    if (*apply) return cmd_apply(common);
    if (*dist) return cmd_distance(common, model);
    if (*decompose) return cmd_decompose(common, kind, random);
    if (*cayley_cmd) return cmd_cayley(common, inverse);
    if (*report) return cmd_report(common, table, samples);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomain;
  }
  return kUsage;
}
