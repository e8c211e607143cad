#include "rankone/io.hpp"

#include <cmath>
#include <cstdio>

namespace rankone {
namespace {

void dump_into(const Json& value, int indent, int depth, std::string& out) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* newline = indent > 0 ? "\n" : "";
  switch (value.type()) {
    case Json::value_t::object: {
      if (value.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += newline;
      bool first = true;
      // nlohmann's default object type is an ordered std::map, so iteration is sorted.
      for (auto it = value.begin(); it != value.end(); ++it) {
        if (!first) {
          out += ",";
          out += newline;
        }
        first = false;
        out += pad;
        out += Json(it.key()).dump();
        out += indent > 0 ? ": " : ":";
        dump_into(it.value(), indent, depth + 1, out);
      }
      out += newline;
      out += close_pad;
      out += "}";
      return;
    }
    case Json::value_t::array: {
      if (value.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool scalar = true;
      for (const auto& x : value) scalar = scalar && !x.is_structured();
      out += "[";
      bool first = true;
      for (const auto& x : value) {
        if (!first) out += scalar && indent > 0 ? ", " : ",";
        if (!scalar) {
          out += newline;
          out += pad;
        }
        first = false;
        dump_into(x, indent, depth + 1, out);
      }
      if (!scalar) {
        out += newline;
        out += close_pad;
      }
      out += "]";
      return;
    }
    case Json::value_t::number_float: {
      const double x = value.get<double>();
      if (!std::isfinite(x)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", x);
      std::string text = buf;
      if (text.find_first_of(".eEn") == std::string::npos) text += ".0";
      out += text;
      return;
    }
    default:
      out += value.dump();
  }
}

[[noreturn]] void schema_error(const std::string& msg) { fail(ErrorCode::schema, msg); }

const Json& field(const Json& value, const char* key) {
  if (!value.is_object() || !value.contains(key)) schema_error(std::string("missing field '") + key + "'");
  return value.at(key);
}

double number(const Json& value, const char* what) {
  if (!value.is_number()) schema_error(std::string(what) + " must be a number");
  return value.get<double>();
}

}  // namespace

std::string dump_canonical(const Json& value, int indent) {
  std::string out;
  dump_into(value, indent, 0, out);
  return out;
}

Json vec_to_json(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Vec vec_from_json(const Json& value, Eigen::Index expected) {
  if (!value.is_array()) schema_error("expected an array of numbers");
  Vec out(static_cast<Eigen::Index>(value.size()));
  for (std::size_t i = 0; i < value.size(); ++i) out(static_cast<Eigen::Index>(i)) = number(value[i], "array entry");
  if (expected >= 0 && out.size() != expected)
    schema_error("expected " + std::to_string(expected) + " entries, got " + std::to_string(out.size()));
  return out;
}

Json mat_to_json(const Mat& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vec_to_json(m.row(r).transpose()));
  return out;
}

Mat mat_from_json(const Json& value, Eigen::Index rows, Eigen::Index cols) {
  if (!value.is_array()) schema_error("expected a matrix as an array of rows");
  const auto r = static_cast<Eigen::Index>(value.size());
  if (rows >= 0 && r != rows) schema_error("expected " + std::to_string(rows) + " rows");
  if (r == 0) return Mat(0, cols < 0 ? 0 : cols);
  const Vec first = vec_from_json(value[0], cols);
  Mat out(r, first.size());
  out.row(0) = first.transpose();
  for (Eigen::Index i = 1; i < r; ++i) out.row(i) = vec_from_json(value[static_cast<std::size_t>(i)], first.size()).transpose();
  return out;
}

Json module_to_json(const ModuleSpec& spec) {
  Json gens = Json::array();
  for (const auto& g : spec.gens) gens.push_back(mat_to_json(g));
  return Json{{"d", spec.d}, {"n", spec.n}, {"gens", gens}, {"j2_expected", spec.j2_expected}};
}

ModuleSpec module_from_json(const Json& value) {
  const Json& d_field = field(value, "d");
  const Json& n_field = field(value, "n");
  if (!d_field.is_number_integer() || !n_field.is_number_integer()) schema_error("d and n must be integers");
  const int d = d_field.get<int>(), n = n_field.get<int>();
  if (!value.contains("gens")) return make_module(d, n);
  const Json& gens = value.at("gens");
  if (!gens.is_array() || static_cast<int>(gens.size()) != d) schema_error("gens must hold d matrices");
  ModuleSpec spec;
  spec.d = d;
  spec.n = n;
  spec.j2_expected = value.value("j2_expected", true);
  for (const auto& g : gens) spec.gens.push_back(mat_from_json(g));
  spec.vdim = static_cast<int>(spec.gens.front().rows());
  validate_module(spec);
  return spec;
}

Json cline_to_json(const CLine& line) { return Json{{"frame", mat_to_json(line.frame())}}; }

CLine cline_from_json(const ModuleSpec& spec, const Json& value) {
  const Mat frame = mat_from_json(field(value, "frame"), -1, spec.dim_w());
  return cline_from_span(frame.transpose());
}

Json point_to_json(const ModuleSpec& spec, const CPWPoint& p) {
  if (p.is_finite())
    return Json{{"finite", {{"zeta", vec_to_json(zeta_part(spec, p.w()))}, {"v", vec_to_json(v_part(spec, p.w()))}}}};
  return Json{{"infinity", cline_to_json(p.line())}};
}

CPWPoint point_from_json(const ModuleSpec& spec, const Json& value) {
  if (!value.is_object()) schema_error("a point must be an object");
  if (value.contains("finite")) {
    const Json& f = value.at("finite");
    return CPWPoint::finite(join(vec_from_json(field(f, "zeta"), spec.d), vec_from_json(field(f, "v"), spec.vdim)));
  }
  if (value.contains("infinity")) {
    const Json& f = value.at("infinity");
    if (f.is_object() && f.contains("w")) return infinity_of(spec, vec_from_json(f.at("w"), spec.dim_w()));
    return CPWPoint::infinity(cline_from_json(spec, f));
  }
  schema_error("a point needs a 'finite' or 'infinity' field");
}

Json word_to_json(const TransformWord& word) {
  Json out = Json::array();
  for (const auto& p : word) {
    out.push_back(std::visit(
        [](const auto& x) -> Json {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, prim::KMat>) return {{"kind", "kmat"}, {"mat", mat_to_json(x.mat)}};
          else if constexpr (std::is_same_v<T, prim::GLMat>) return {{"kind", "glmat"}, {"mat", mat_to_json(x.mat)}};
          else if constexpr (std::is_same_v<T, prim::BTheta>) return {{"kind", "btheta"}, {"theta", x.theta}};
          else if constexpr (std::is_same_v<T, prim::ATime>) return {{"kind", "atime"}, {"t", x.t}};
          else if constexpr (std::is_same_v<T, prim::Translate>) return {{"kind", "translate"}, {"w", vec_to_json(x.w)}};
          else if constexpr (std::is_same_v<T, prim::ThetaTranslate>)
            return {{"kind", "theta_translate"}, {"w", vec_to_json(x.w)}};
          else return {{"kind", "theta"}};
        },
        p));
  }
  return out;
}

TransformWord word_from_json(const ModuleSpec& spec, const Json& value) {
  if (!value.is_array()) schema_error("a word must be an array of primitives");
  const Eigen::Index dim = spec.dim_w();
  TransformWord out;
  for (const auto& item : value) {
    const Json& kind_field = field(item, "kind");
    if (!kind_field.is_string()) schema_error("'kind' must be a string");
    const std::string kind = kind_field.get<std::string>();
    if (kind == "kmat") {
      const Mat k = mat_from_json(field(item, "mat"), dim, dim);
      if (!is_k_member(spec, k)) fail(ErrorCode::domain, "kmat is not an element of K");
      out.push_back(prim::KMat{k});
    } else if (kind == "glmat") {
      const Mat g = mat_from_json(field(item, "mat"), dim, dim);
      if (!is_glwc(spec, g)) fail(ErrorCode::not_glwc, "glmat does not preserve C-lines");
      out.push_back(prim::GLMat{g});
    } else if (kind == "btheta") {
      out.push_back(prim::BTheta{number(field(item, "theta"), "theta")});
    } else if (kind == "atime") {
      out.push_back(prim::ATime{number(field(item, "t"), "t")});
    } else if (kind == "translate") {
      out.push_back(prim::Translate{vec_from_json(field(item, "w"), dim)});
    } else if (kind == "theta_translate") {
      out.push_back(prim::ThetaTranslate{vec_from_json(field(item, "w"), dim)});
    } else if (kind == "theta") {
      out.push_back(prim::ThetaConj{});
    } else {
      schema_error("unknown primitive kind '" + kind + "'");
    }
  }
  return out;
}

Json lambda_to_json(const LambdaMatrix& lambda) {
  Json rows = Json::array();
  for (int j = 0; j < lambda.size(); ++j) {
    Json row = Json::array();
    for (int k = 0; k < j; ++k) row.push_back(vec_to_json(lambda.at(j, k)));
    rows.push_back(row);
  }
  return rows;
}

Json iwasawa_to_json(const Iwasawa& kan) {
  return Json{{"k", mat_to_json(kan.k)},
              {"a", vec_to_json(kan.a.t)},
              {"n", {{"lambda", lambda_to_json(kan.lambda)}}},
              {"residual", kan.residual}};
}

Json cartan_to_json(const Cartan& kak) {
  return Json{{"k1", mat_to_json(kak.k1)}, {"a", vec_to_json(kak.a.t)}, {"k2", mat_to_json(kak.k2)}, {"residual", kak.residual}};
}

}  // namespace rankone
