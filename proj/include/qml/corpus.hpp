#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qml/calculus.hpp"

namespace qml {

// A named derivation shipped with the library.  The bundle exercises
// every rule of the calculus at least once and doubles as input for the
// soundness suite: each root sequent must survive the countermodel hunt.
struct corpus_entry {
    std::string name;
    derivation proof;
};

// The built-in derivations in a fixed order.  Every entry passes
// check_derivation; tests enforce that along with the rule coverage.
const std::vector<corpus_entry>& builtin_corpus();

// Lookup by name; nullptr when absent.
const corpus_entry* find_corpus_entry(std::string_view name);

}  // namespace qml
