#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qml/calculus.hpp"
#include "qml/formula.hpp"

namespace qml {

// Exhaustive property scans over the canonical structure stream.  Each
// scan checks one semantic law on every structure within its bounds and
// reports the first counterexample it meets, if any.  The `parallel`
// flag switches the OpenMP kernels on; results are identical either way.

struct scan_stats {
    std::uint64_t structures = 0;
    std::uint64_t checks = 0;
    std::uint64_t failures = 0;
    std::string first_failure;  // empty when clean

    bool clean() const { return failures == 0; }
};

// Truth sets are closed under double ortho: for every structure with up
// to max_worlds worlds over the atoms and every formula of the given
// depth, biortho(truth_set(f)) == truth_set(f).
scan_stats closedness_scan(int max_worlds, const std::vector<std::string>& atoms,
                           int formula_depth, bool parallel = true);
// Reference implementation over the public stream and the naive
// evaluator; same contract, for differential tests and the benchmark.
scan_stats closedness_scan_naive(int max_worlds, const std::vector<std::string>& atoms,
                                 int formula_depth);

// Pointwise box excluded middle: truth_set([]a) with truth_set(~[]a)
// covers every world, for all a up to formula_depth.
scan_stats box_cover_scan(int max_worlds, const std::vector<std::string>& atoms,
                          int formula_depth, bool parallel = true);

// Forcing equivalence: over every reflexive-symmetric rq and every raw rm
// (all 2^(n*n) of them), the pointwise forcing check agrees with
// "every rm column is a union of rq-components".
scan_stats forcing_scan(int max_worlds);

// Orthocomplement laws on seeded random frames: X subset of biortho(X);
// X subset of Y implies ortho(Y) subset of ortho(X); ortho(X) ==
// ortho(biortho(X)).
scan_stats ortho_laws_scan(int frames, int max_worlds, std::uint64_t seed);

// Alethic structures (rm = rq): validity coincides with rq transitivity,
// and iterated boxes collapse: [][]a == []a and <>[]a == []a.
scan_stats alethic_scan(int max_worlds, const std::vector<std::string>& atoms,
                        int formula_depth);

// On alethic structures the two diamond readings coincide: truth(<>a) ==
// worlds with some rm-successor satisfying a.
scan_stats diamond_scan(int max_worlds, const std::vector<std::string>& atoms,
                        int formula_depth);

// Semantic side of the soundness bridge: for each named sequent, hunt for
// per-formula countermodels over all structures up to max_worlds (atoms
// pooled across all entries).  A sound conclusion leaves at least one
// right-side formula (or, for an empty right side, the left side's
// unsatisfiability) standing.
struct soundness_entry {
    std::string name;
    sequent conclusion;
};

struct soundness_outcome {
    std::string name;
    bool refuted = false;            // true means the conclusion fails semantically
    std::vector<formula> standing;   // right-side formulas never refuted
    bool left_unsatisfiable = false; // meaningful when the right side is empty
};

std::vector<soundness_outcome> soundness_scan(std::span<const soundness_entry> entries,
                                              int max_worlds, bool parallel = true);

}  // namespace qml
