#pragma once

#include <json.hpp>

#include "qml/frame.hpp"

namespace qml {

// Wire schema for structures:
//   {"worlds": ["w0", "w1"],
//    "rq": [[0, 1]],
//    "rm": [[1, 0]],
//    "valuation": {"p": [0]}}
// Worlds are named; relation pairs and valuation entries use indices into
// the worlds array.  Reflexive rq pairs may be omitted and are added on
// load; symmetry is never completed silently, a one-way pair surfaces in
// validate() instead.  Evaluating a formula whose atom is absent from
// "valuation" is an error, so model files should list every atom used.
structure structure_from_json(const nlohmann::json& j);
nlohmann::json structure_to_json(const structure& s);

}  // namespace qml
