#pragma once

#include <string>
#include <variant>

#include "ffmop/polynomial.hpp"
#include "ffmop/weights.hpp"
#include "json.hpp"

namespace ffmop::cli {

using json = nlohmann::json;
using AnySpec = std::variant<MDTWeightSpec, ADTWeightSpec>;

// Weight-spec JSON: {"kind": "mdt"|"adt", "c", "s0", "strip_lo",
// "terms": [{"a_re", "a_im", "d1", "b", "d2"}, ...]}. Throws DomainError.
AnySpec spec_from_json(const json& j);
json spec_to_json(const AnySpec& s);
AnySpec read_spec_file(const std::string& path);

// Polynomials as JSON arrays of coefficients, lowest degree first.
Poly poly_from_json(const json& j);
json poly_to_json(const Poly& p);
json parse_json_text(const std::string& text, const std::string& what);

}  // namespace ffmop::cli
