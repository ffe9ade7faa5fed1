#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "qml/eval.hpp"
#include "qml/formula.hpp"
#include "qml/frame.hpp"

namespace qml {

// Enumerating all structures is exponential twice over; keep the default
// ceiling small and let callers raise it deliberately (hard cap below).
inline constexpr int k_default_exhaustive_worlds = 4;
inline constexpr int k_exhaustive_cap = 6;
inline constexpr int k_random_worlds_cap = 16;

struct search_budget {
    int max_worlds = k_default_exhaustive_worlds;
    std::vector<std::string> atoms;
    bool random = false;
    std::uint64_t seed = 0;
    std::uint64_t samples = 0;

    static search_budget exhaustive(int max_worlds, std::vector<std::string> atoms);
    static search_budget randomized(int max_worlds, std::vector<std::string> atoms,
                                    std::uint64_t seed, std::uint64_t samples);
};

// Position of a structure in the canonical exhaustive order, which is
// ascending lexicographic over (n, rq_mask, rm_index, val_index):
//  - rq_mask: one bit per unordered world pair in the order
//    (0,1),(0,2),...,(0,n-1),(1,2),...; bit set means the pair is
//    rq-related.  The diagonal is always present.
//  - rm_index: base-2^c digits, c = number of rq-components; digit l
//    (least significant first) selects the component set whose union is
//    rm's column l.  Component bits follow component ids (numbered by
//    smallest member).
//  - val_index: mixed radix over the sorted atom list, k = number of
//    rq-closed sets; the first atom is the least significant digit; digit
//    value d picks the d-th closed set in ascending mask order.
struct canonical_key {
    int n = 0;
    std::uint64_t rq_mask = 0;
    std::uint64_t rm_index = 0;
    std::uint64_t val_index = 0;

    bool operator==(const canonical_key&) const = default;
    std::strong_ordering operator<=>(const canonical_key&) const = default;
};

// Every valid structure with 1..max_worlds worlds over the budget's atoms
// exactly once, in canonical order; stop early by returning false.  In
// random mode, yields `samples` independently drawn valid structures
// (reproducible from the seed; val_index is not meaningful then).
void for_each_structure(const search_budget& budget,
                        const std::function<bool(const structure&, const canonical_key&)>& visit);

// Number of structures the exhaustive stream yields, by closed form.
std::uint64_t count_structures(const search_budget& budget);

struct countermodel {
    structure model;
    int witness_world = 0;     // satisfies gamma, not alpha
    canonical_key where;       // meaningful in exhaustive mode only
};

// First structure (canonical order; first sample in random mode) with a
// world satisfying all of gamma but not alpha, with the smallest such
// world as witness.
std::optional<countermodel> find_countermodel(const formula_set& gamma, const formula& alpha,
                                              const search_budget& budget);
// Reference implementation over the public stream and the naive
// evaluator; same contract, kept for differential testing.
std::optional<countermodel> find_countermodel_serial(const formula_set& gamma,
                                                     const formula& alpha,
                                                     const search_budget& budget);

// Refuting gamma |- delta needs one countermodel per delta formula (and
// for empty delta, one gamma-satisfying world).
struct refutation {
    std::vector<std::pair<formula, countermodel>> per_formula;
    std::optional<countermodel> gamma_witness;  // the empty-delta case
};

// A full refutation, or nullopt when some delta formula (or, for empty
// delta, gamma's unsatisfiability) survives the budget.  On nullopt,
// *survivor (when non-null) names the first delta formula that resisted.
std::optional<refutation> refute_entailment(const entailment_query& q,
                                            const search_budget& budget,
                                            formula* survivor = nullptr);

}  // namespace qml
