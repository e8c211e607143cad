#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "rankone/glwc.hpp"
#include "rankone/transforms.hpp"

namespace rankone {

using Json = nlohmann::json;

// Deterministic text: object keys sorted, floats with 17 significant digits.
std::string dump_canonical(const Json& value, int indent = 2);

Json vec_to_json(const Vec& v);
Vec vec_from_json(const Json& value, Eigen::Index expected = -1);
Json mat_to_json(const Mat& m);
Mat mat_from_json(const Json& value, Eigen::Index rows = -1, Eigen::Index cols = -1);

Json module_to_json(const ModuleSpec& spec);
ModuleSpec module_from_json(const Json& value);

Json cline_to_json(const CLine& line);
CLine cline_from_json(const ModuleSpec& spec, const Json& value);

Json point_to_json(const ModuleSpec& spec, const CPWPoint& p);
CPWPoint point_from_json(const ModuleSpec& spec, const Json& value);

Json word_to_json(const TransformWord& word);
TransformWord word_from_json(const ModuleSpec& spec, const Json& value);

Json lambda_to_json(const LambdaMatrix& lambda);
Json iwasawa_to_json(const Iwasawa& kan);
Json cartan_to_json(const Cartan& kak);

}  // namespace rankone
