#pragma once

#include <json.hpp>

#include "crjet/hypersurface.hpp"
#include "crjet/series.hpp"

namespace crjet {

using Json = nlohmann::json;

Json crat_to_json(const CRat& value);
CRat crat_from_json(const Json& doc);

// One record per monomial: exponents over the declared variable order plus
// the exact fraction strings of the coefficient. Lossless and diff-friendly;
// series_from_json(series_to_json(s)) has an identical coefficient map.
Json series_to_json(const Series& s);
Series series_from_json(const Json& doc);

Json point_to_json(const Point& q);
Json matrix_to_json(const Matrix& m);

}  // namespace crjet
