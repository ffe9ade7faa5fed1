#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qml/formula.hpp"

namespace qml {

// Worlds are dense indices 0..n-1 packed into one 64-bit mask.
inline constexpr int k_max_worlds = 64;
// closed_sets() enumerates all 2^n subsets; refuse beyond this size.
inline constexpr int k_subset_guard = 20;

inline std::uint64_t full_mask(int n) {
    return n >= 64 ? ~0ull : (1ull << n) - 1;
}

// Subset of the worlds of one structure.  Operations on sets from
// structures of different sizes throw.
class world_set {
public:
    world_set() = default;
    explicit world_set(int world_count);
    static world_set from_bits(int world_count, std::uint64_t bits);
    static world_set full(int world_count);
    static world_set single(int world_count, int i);

    int world_count() const { return n_; }
    std::uint64_t bits() const { return bits_; }
    int size() const;
    bool none() const { return bits_ == 0; }

    bool contains(int i) const;
    world_set& add(int i);
    world_set& remove(int i);

    world_set united(const world_set& other) const;
    world_set intersected(const world_set& other) const;
    world_set minus(const world_set& other) const;
    world_set complemented() const;
    bool subset_of(const world_set& other) const;

    std::vector<int> members() const;

    bool operator==(const world_set&) const = default;
    std::strong_ordering operator<=>(const world_set&) const = default;

private:
    int n_ = 0;
    std::uint64_t bits_ = 0;

    void check_index(int i) const;
    void check_same(const world_set& other) const;
};

// Binary relation on 0..n-1, stored as one successor mask per world:
// bit j of row_bits(i) means the pair (i, j) is in the relation.
class relation {
public:
    relation() = default;
    explicit relation(int world_count);
    static relation identity(int world_count);
    static relation total(int world_count);
    static relation from_pairs(int world_count,
                               const std::vector<std::pair<int, int>>& pairs);
    static relation from_rows(int world_count, std::span<const std::uint64_t> rows);

    int world_count() const { return n_; }
    bool at(int i, int j) const;
    void set(int i, int j, bool value = true);
    void link(int i, int j);  // set both (i,j) and (j,i)

    std::uint64_t row_bits(int i) const;
    world_set row(int i) const;
    world_set column(int j) const;
    std::span<const std::uint64_t> rows() const { return rows_; }

    bool reflexive() const;
    bool symmetric() const;
    bool transitive() const;

    bool operator==(const relation&) const = default;

private:
    int n_ = 0;
    std::vector<std::uint64_t> rows_;

    void check_index(int i) const;
};

// One reason a structure fails validation.  Indices refer to worlds;
// `atom` is set only for valuation failures.
struct violation {
    enum class code { not_reflexive, not_symmetric, forcing, valuation_not_closed };

    code what;
    int i = -1;
    int j = -1;
    int l = -1;
    std::string atom;

    std::string message() const;
};

std::ostream& operator<<(std::ostream& os, const violation& v);

// A finite modal structure: world count, accessibility relation rq
// (intended reflexive and symmetric), modal relation rm, and a valuation
// mapping atoms to world sets.  Construction checks only shape (matching
// sizes, 1..64 worlds, distinct world names); the semantic conditions are
// checked by validate(), which callers run when they need the guarantees.
class structure {
public:
    structure(relation rq, relation rm,
              std::map<std::string, world_set> valuation,
              std::vector<std::string> world_names = {});

    int world_count() const { return n_; }
    const relation& rq() const { return rq_; }
    const relation& rm() const { return rm_; }
    const std::map<std::string, world_set>& valuation() const { return valuation_; }

    // Null when the atom has no entry.
    const world_set* atom_truth(std::string_view atom) const;

    const std::string& world_name(int i) const;
    const std::vector<std::string>& world_names() const { return names_; }
    // -1 when no world has this name.
    int world_index(std::string_view name) const;

    // Empty iff the structure satisfies all frame conditions: rq reflexive
    // and symmetric, rm forced along rq (rm(i,l) and rq(i,j) imply
    // rm(j,l)), and every valuation set closed under double ortho.
    std::vector<violation> validate() const;

    bool operator==(const structure&) const = default;

private:
    int n_;
    relation rq_;
    relation rm_;
    std::map<std::string, world_set> valuation_;
    std::vector<std::string> names_;
};

// Mask-level kernels shared by the structure-level wrappers and the
// enumeration loops.  rq_rows must have n entries.
std::uint64_t ortho_bits(int n, std::span<const std::uint64_t> rq_rows, std::uint64_t x);
std::uint64_t biortho_bits(int n, std::span<const std::uint64_t> rq_rows, std::uint64_t x);
bool forcing_holds_bits(int n, std::span<const std::uint64_t> rq_rows,
                        std::span<const std::uint64_t> rm_rows);
// All fixpoints of the double ortho map, ascending by mask.  Guarded by
// k_subset_guard.
std::vector<std::uint64_t> closed_set_bits(int n, std::span<const std::uint64_t> rq_rows);

// x^⊥: the worlds not rq-related to any member of x.
world_set ortho(const structure& s, const world_set& x);
world_set biortho(const structure& s, const world_set& x);
bool is_closed(const structure& s, const world_set& x);
std::vector<world_set> closed_sets(const structure& s);

// Partition of the worlds into rq-connected components.  Components are
// numbered by their smallest member, ascending.
struct component_partition {
    int count = 0;
    std::vector<int> component_of;     // world index -> component id
    std::vector<std::uint64_t> masks;  // component id -> member mask
};

component_partition components_bits(int n, std::span<const std::uint64_t> rows);
// Requires rq reflexive and symmetric; throws otherwise.
component_partition rq_components(const structure& s);

// The forcing condition restated on components: every rm column must be a
// union of rq-components.  Equivalent to the pointwise condition when rq
// is reflexive and symmetric.
bool forcing_by_components(const structure& s);

// Structure with rm equal to rq (so rq must additionally be transitive to
// validate; this constructor does not check, validate() reports it via
// the forcing condition).
structure make_alethic(relation rq, std::map<std::string, world_set> valuation,
                       std::vector<std::string> world_names = {});

}  // namespace qml
