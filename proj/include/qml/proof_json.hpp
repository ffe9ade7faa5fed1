#pragma once

#include <json.hpp>

#include "qml/calculus.hpp"

namespace qml {

// Wire schema for derivation trees, one object per node:
//   {"conclusion": {"left": ["p & q"], "right": ["p"]},
//    "rule": {"name": "AND_L1", "formulas": ["p", "q"]},
//    "premises": [ ...child nodes... ]}
// Formulas are grammar strings.  Rules with one parameter carry it as
// "formula"; AND_L1 and AND_L2 carry both as "formulas"; parameterless
// rules have just "name".  "premises" may be omitted when empty.
derivation derivation_from_json(const nlohmann::json& j);
nlohmann::json derivation_to_json(const derivation& d);

}  // namespace qml
