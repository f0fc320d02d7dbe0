#include "crjet/serialize.hpp"

#include "crjet/errors.hpp"

namespace crjet {

Json crat_to_json(const CRat& value) {
  return Json{{"re", rational_to_string(value.re)}, {"im", rational_to_string(value.im)}};
}

CRat crat_from_json(const Json& doc) {
  return CRat(rational_from_string(doc.at("re").get<std::string>()),
              rational_from_string(doc.at("im").get<std::string>()));
}

Json series_to_json(const Series& s) {
  Json doc;
  doc["variables"] = s.ring()->names();
  doc["order"] = s.ring()->order();
  doc["exact"] = s.is_exact();
  if (!s.is_exact()) doc["trusted"] = s.trusted();
  Json terms = Json::array();
  for (const auto& [exps, value] : s.sorted_terms()) {
    Json term;
    term["exponents"] = exps;
    term["re"] = rational_to_string(value.re);
    term["im"] = rational_to_string(value.im);
    terms.push_back(std::move(term));
  }
  doc["terms"] = std::move(terms);
  return doc;
}

Series series_from_json(const Json& doc) {
  std::vector<std::string> names = doc.at("variables").get<std::vector<std::string>>();
  int order = doc.at("order").get<int>();
  RingPtr ring = Ring::make(std::move(names), order);
  Series out(ring);
  for (const Json& term : doc.at("terms")) {
    MultiIndex exps = term.at("exponents").get<MultiIndex>();
    CRat value(rational_from_string(term.at("re").get<std::string>()),
               rational_from_string(term.at("im").get<std::string>()));
    if (value.is_zero()) continue;
    out.add_term(ring->pack(exps), value);
  }
  if (doc.value("exact", true)) {
    out.set_trusted(kExactDegree);
  } else {
    out.set_trusted(doc.value("trusted", order));
  }
  return out;
}

Json point_to_json(const Point& q) {
  Json coords = Json::array();
  for (const CRat& c : q.z) coords.push_back(crat_to_json(c));
  coords.push_back(crat_to_json(q.w));
  return coords;
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (const auto& row : m) {
    Json r = Json::array();
    for (const CRat& c : row) r.push_back(crat_to_json(c));
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace crjet
