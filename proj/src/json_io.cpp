#include "coleman/json_io.hpp"

namespace coleman {

namespace {

mpz_class big(const json& v, const char* what) {
  if (!v.is_string()) throw std::invalid_argument(std::string(what) + " must be a decimal string");
  mpz_class r;
  if (r.set_str(v.get<std::string>(), 10) != 0) throw std::invalid_argument(std::string("bad integer for ") + what);
  return r;
}

json matrix_json(const std::vector<std::vector<mpz_class>>& m) {
  json out = json::array();
  for (const auto& row : m) {
    json r = json::array();
    for (const auto& v : row) r.push_back(v.get_str());
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::vector<mpz_class>> matrix_from(const json& j, const char* what) {
  std::vector<std::vector<mpz_class>> out;
  for (const auto& row : j) {
    out.emplace_back();
    for (const auto& v : row) out.back().push_back(big(v, what));
  }
  return out;
}

}  // namespace

Curve curve_from_json(const json& j) {
  try {
    const mpz_class p = big(j.at("p"), "p");
    const int N = j.at("N").get<int>();
    std::vector<mpq_class> Q;
    for (const auto& a : j.at("Q")) Q.push_back(parse_rational(a.get<std::string>()));
    return Curve::make(p, N, std::move(Q));
  } catch (const json::exception& e) {
    throw InvalidCurve(std::string("malformed curve file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InvalidCurve(std::string("malformed curve file: ") + e.what());
  } catch (const NotSquarefree& e) {
    throw InvalidCurve(e.what());
  }
}

json curve_to_json(const Curve& c) {
  json Q = json::array();
  for (const auto& a : c.Q) Q.push_back(a.get_str());
  return json{{"p", c.p.get_str()}, {"N", c.N}, {"Q", Q}};
}

std::vector<RationalPoint> points_from_json(const json& j) {
  std::vector<RationalPoint> out;
  try {
    for (const auto& e : j) {
      if (e.contains("infinity") && e.at("infinity").get<bool>()) {
        out.push_back(RationalPoint{0, 0, true});
        continue;
      }
      out.push_back(RationalPoint{parse_rational(e.at("x").get<std::string>()),
                                  parse_rational(e.at("y").get<std::string>()), false});
    }
  } catch (const json::exception& e) {
    throw InvalidPoint(std::string("malformed points file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InvalidPoint(std::string("malformed points file: ") + e.what());
  }
  return out;
}

json value_to_json(const PadicValue& v) {
  return json{{"mantissa", v.mantissa.get_str()}, {"shift", v.shift}, {"abs_prec", v.abs_prec}};
}

json integral_to_json(const IntegralResult& r) {
  json vals = json::array();
  for (const auto& v : r.values) vals.push_back(value_to_json(v));
  return json{{"values", vals}, {"abs_prec", r.abs_prec}};
}

json data_to_json(const ColemanData& d, int h) {
  json pts = json::array();
  for (const auto& P : d.points) pts.push_back(json{{"x", P.x.get_str()}, {"y", P.y.get_str()}});
  return json{{"p", d.p.get_str()},
              {"N", d.N},
              {"genus", d.genus},
              {"frobenius", matrix_json(d.frobenius)},
              {"evaluations", matrix_json(d.evaluations)},
              {"det_m_minus_i_valuation", h},
              {"points", pts}};
}

ColemanData data_from_json(const json& j) {
  ColemanData d;
  d.p = big(j.at("p"), "p");
  d.N = j.at("N").get<int>();
  d.genus = j.at("genus").get<int>();
  d.frobenius = matrix_from(j.at("frobenius"), "frobenius");
  d.evaluations = matrix_from(j.at("evaluations"), "evaluations");
  const std::size_t G2 = static_cast<std::size_t>(2 * d.genus);
  if (d.frobenius.size() != G2 || d.evaluations.size() != G2)
    throw std::invalid_argument("cached data: matrix sizes do not match the genus");
  for (const auto& P : j.at("points")) d.points.push_back(PointMod{big(P.at("x"), "x"), big(P.at("y"), "y"), false});
  for (const auto& row : d.evaluations)
    if (row.size() != d.points.size()) throw std::invalid_argument("cached data: evaluation count mismatch");
  return d;
}

}  // namespace coleman
