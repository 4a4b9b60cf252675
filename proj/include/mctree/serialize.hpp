#pragma once

#include "mctree/chain.hpp"
#include "mctree/forest.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace mctree {

using Json = nlohmann::json;

// Exact values are canonical "num/den" strings; the float variants hold
// decimals rounded to 12 significant digits.
Json rational_json(const Rational& x);
Json rationals_json(const std::vector<Rational>& xs);
Json matrix_json(const RationalMatrix& m);
Json float_json(const Rational& x);
Json floats_json(const std::vector<Rational>& xs);
Json float_matrix_json(const RationalMatrix& m);

// {"roots": [...], "parent": {"v": "u", ...}}, states written as labels.
Json forest_json(const RootedForest& f, const std::vector<std::string>& labels);
// Same shape with the successor map under "parent", plus "cycles".
Json ecrsf_json(const Ecrsf& f, const std::vector<std::string>& labels);

// Inverses of the two above. Throw ParseError on a malformed document.
RootedForest forest_from_json(const Json& doc, const std::vector<std::string>& labels);
Ecrsf ecrsf_from_json(const Json& doc, const std::vector<std::string>& labels);

} // namespace mctree
