#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qml/frame.hpp"

namespace qml {

// Helpers pinning the canonical enumeration encoding described on
// canonical_key (search.hpp).  Shared by the structure stream, the
// countermodel kernels and the property scans so they cannot drift.

inline int world_pair_count(int n) {
    return n * (n - 1) / 2;
}

// Reflexive symmetric rows from a pair mask: bit t covers the t-th pair
// in the order (0,1),(0,2),...,(0,n-1),(1,2),...
std::vector<std::uint64_t> rq_rows_from_mask(int n, std::uint64_t mask);

// Everything derived from one rq choice that the inner loops reuse.
struct rq_block {
    int n = 0;
    std::uint64_t rq_mask = 0;
    std::vector<std::uint64_t> rq_rows;
    component_partition comps;
    std::vector<std::uint64_t> closed;  // ascending masks
    std::uint64_t rm_count = 0;         // 2^(components * n)
    std::uint64_t val_count = 0;        // closed.size() ^ atom_count
};

rq_block make_rq_block(int n, std::uint64_t mask, std::size_t atom_count);

// Column l of rm is the union of the components picked by base-2^c digit
// l of rm_index (least significant digit first).
std::vector<std::uint64_t> rm_rows_from_index(const rq_block& b, std::uint64_t rm_index);

// Closed-set mask assigned to the atom at sorted position `pos`; the
// first atom is the least significant base-k digit of val_index.
std::uint64_t val_digit_bits(const rq_block& b, std::uint64_t val_index, int pos);

structure materialize(const rq_block& b, std::span<const std::uint64_t> rm_rows,
                      const std::vector<std::string>& atoms, std::uint64_t val_index);

}  // namespace qml
