#pragma once

#include <json.hpp>

#include <vector>

#include "coleman/colemanint.hpp"

namespace coleman {

using json = nlohmann::ordered_json;

// {"p": "11", "N": 2, "Q": ["1", "0", "-1/2", "1"]}; throws InvalidCurve.
Curve curve_from_json(const json& j);
json curve_to_json(const Curve& c);

// [{"x": "1/2", "y": "3"}, {"infinity": true}, ...]; throws InvalidPoint.
std::vector<RationalPoint> points_from_json(const json& j);

json value_to_json(const PadicValue& v);
json integral_to_json(const IntegralResult& r);

// Output object for `data`; h is v_p(det(M - I)).
json data_to_json(const ColemanData& d, int h);
// Reads back the fields written by data_to_json.
ColemanData data_from_json(const json& j);

}  // namespace coleman
