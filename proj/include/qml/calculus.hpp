#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qml/formula.hpp"

namespace qml {

// Sequents are pairs of formula sets, so contraction, exchange and
// idempotent weakening are built into the representation.
struct sequent {
    formula_set left;
    formula_set right;

    bool operator==(const sequent&) const = default;
    std::strong_ordering operator<=>(const sequent&) const = default;
};

// Text form: comma-separated formulas, "|-" (or "⊢") between the sides,
// either side may be empty.  Example: "p & q, r |- s, ~t".
sequent parse_sequent(std::string_view text);
std::string print(const sequent& s);
std::ostream& operator<<(std::ostream& os, const sequent& s);

// The rule schemas.  Arities: ax and mem take no premises; cut, conj_r
// take two; the rest take one.  Parameters pin instantiation choices the
// conclusion alone does not determine:
//   ax        none                    a |- a
//   mem       [a]                     G |- []a, ~[]a
//   wkn       none                    weaken either side of the premise
//   cut       [a]                     G |- D,a   and   a,L |- S
//   conj_l1   [a, b]                  replace a on the left by a & b
//   conj_l2   [a, b]                  replace b on the left by a & b
//   conj_r    none                    G |- D,a   and   G |- D,b  gives  G |- D, a&b
//   neg_l     [a]                     from G |- D,a add ~a on the left, drop a
//   neg_r     none                    a |- D  gives  ~D |- ~a   (left must be a singleton)
//   negneg_l  [a]                     replace a on the left by ~~a
//   negneg_r  [a]                     replace a on the right by ~~a
//   k         none                    G |- a  gives  []G |- []a  (right must be a singleton)
enum class rule : std::uint8_t {
    ax, mem, wkn, cut, conj_l1, conj_l2, conj_r, neg_l, neg_r, negneg_l, negneg_r, k
};

inline constexpr int k_rule_count = 12;

std::string_view rule_name(rule r);  // wire names: AX, MEM, WKN, CUT, ...
std::optional<rule> rule_from_name(std::string_view name);
int rule_arity(rule r);       // number of premises
int rule_param_count(rule r); // number of formula parameters

struct rule_instance {
    rule r;
    std::vector<formula> params;

    bool operator==(const rule_instance&) const = default;
};

// True iff the premises yield the conclusion by this rule instance,
// checked against the schema exactly (wrong arity or parameter count is
// simply false).  reason, when given, receives a short explanation for
// failures.
bool check_rule(const sequent& conclusion, const rule_instance& inst,
                std::span<const sequent> premises, std::string* reason = nullptr);

// A derivation tree.  Leaves use the zero-premise rules.
struct derivation {
    sequent conclusion;
    rule_instance inst;
    std::vector<derivation> premises;

    bool operator==(const derivation&) const = default;
};

// Result of checking a whole tree.  On failure, path holds the premise
// indices from the root to the first offending node (empty for the root)
// and reason says what went wrong there.
struct check_result {
    bool ok = true;
    std::vector<int> path;
    std::string reason;
};

check_result check_derivation(const derivation& d);

// Leaf constructors.
derivation ax(const formula& a);
derivation mem(const formula_set& gamma, const formula& a);

// The explosion pattern: from derivations of G |- D,a and of G |- D,~a,
// derive G |- D,b for arbitrary b by neg_l, cut and weakening.  Throws
// when the two conclusions do not share G and D or differ from the a/~a
// shape.
derivation explosion(const derivation& of_alpha, const derivation& of_neg_alpha,
                     const formula& b);

std::string print_tree(const derivation& d);  // indented, two spaces per level

// Backward proof search over the calculus.  none forbids cut; analytic
// allows cut formulas from the subformulas of the goal and their single
// negations; full extends the candidate pool at every node with the
// subformulas of that node's sequent and their single negations.
enum class cut_policy : std::uint8_t { none, analytic, full };

struct proof_search_options {
    int depth_limit = 6;
    cut_policy cuts = cut_policy::analytic;
    // Safety valve: give up after this many expanded nodes.
    std::uint64_t node_limit = 2'000'000;
};

// A derivation of goal within the limits, or nullopt.  Any returned
// derivation passes check_derivation.
std::optional<derivation> search_proof(const sequent& goal,
                                       const proof_search_options& opts = {});

}  // namespace qml
