#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "qml/formula.hpp"
#include "qml/frame.hpp"

namespace qml {

// One entailment question: do the gamma formulas jointly force some delta
// formula?  Empty gamma means "at every world"; empty delta asks whether
// gamma is unsatisfiable in the structure at hand.
struct entailment_query {
    formula_set gamma;
    formula_set delta;

    bool operator==(const entailment_query&) const = default;
};

// Truth at one world: atoms via the valuation, conjunction pointwise,
// ~a at i iff no rq-neighbour of i satisfies a, []a at i iff every
// rm-successor of i satisfies a.  A formula atom missing from the
// valuation is an error.
bool holds(const structure& s, int world, const formula& f);

// All worlds satisfying f, computed bottom-up over subformulas.
world_set truth_set(const structure& s, const formula& f);

// Reference implementation: per-world recursion with no sharing.  Kept as
// an independent oracle for the set-based evaluator.
world_set truth_set_naive(const structure& s, const formula& f);

// Worlds satisfying every gamma formula (the full set when gamma is empty).
world_set gamma_worlds(const structure& s, const formula_set& gamma);

// True iff every world satisfying all of gamma satisfies some delta
// formula.  With empty delta this means no world satisfies gamma.
bool entails_in(const structure& s, const entailment_query& q);

// Borrowed view of one structure in kernel form.  atom_bits holds one
// truth mask per formula_table atom slot, in slot order.
struct frame_view {
    int n = 0;
    const std::uint64_t* rq_rows = nullptr;
    const std::uint64_t* rm_rows = nullptr;
    const std::uint64_t* atom_bits = nullptr;
};

// Deduplicated formula arena over a fixed atom list.  Entries are stored
// children before parents, so one forward sweep evaluates every formula
// against a frame_view.  Entries whose subtree mentions box are "modal";
// the split lets scan loops recompute only the modal part when the modal
// relation changes under a fixed rq and valuation.
class formula_table {
public:
    explicit formula_table(std::vector<std::string> atoms);

    // Index of f, interning all subformulas.  Throws if f mentions an
    // atom outside the table's list.
    int intern(const formula& f);
    // Intern every formula over the atom list up to the given depth.
    void add_universe(int max_depth);

    int size() const { return static_cast<int>(entries_.size()); }
    int id_of(const formula& f) const;  // -1 when absent
    formula formula_of(int id) const;
    bool modal(int id) const { return entries_[id].modal; }
    const std::vector<std::string>& atoms() const { return atoms_; }

    // Fill out[0..size) with truth masks for every entry.
    void evaluate(const frame_view& fv, std::uint64_t* out) const;
    // Same split in two sweeps: plain entries ignore rm entirely, modal
    // entries may read any out[] slot already filled by the plain sweep.
    void evaluate_plain(const frame_view& fv, std::uint64_t* out) const;
    void evaluate_modal(const frame_view& fv, std::uint64_t* out) const;

private:
    struct entry {
        formula::kind k;
        std::int32_t a = -1;  // atom slot, or first child id
        std::int32_t b = -1;  // second child id for conj
        bool modal = false;
    };

    void evaluate_one(const frame_view& fv, std::uint64_t* out, const entry& e,
                      std::uint64_t& slot) const;

    std::vector<std::string> atoms_;
    std::vector<entry> entries_;
    std::vector<formula> items_;
    std::unordered_map<formula, std::int32_t, formula_hash> ids_;
};

// Owning kernel snapshot of a structure, with atom masks resolved against
// a table's slot order.  Every table atom must be present in the
// structure's valuation.
struct frame_data {
    int n = 0;
    std::vector<std::uint64_t> rq;
    std::vector<std::uint64_t> rm;
    std::vector<std::uint64_t> atom_bits;

    frame_view view() const { return {n, rq.data(), rm.data(), atom_bits.data()}; }
};

frame_data make_frame_data(const structure& s, const formula_table& table);

}  // namespace qml
