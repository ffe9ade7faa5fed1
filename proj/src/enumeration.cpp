#include "qml/enumeration.hpp"

#include <bit>
#include <map>

namespace qml {

std::vector<std::uint64_t> rq_rows_from_mask(int n, std::uint64_t mask) {
    std::vector<std::uint64_t> rows(n);
    for (int i = 0; i < n; ++i) rows[i] = 1ull << i;
    int bit = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++bit)
            if (mask >> bit & 1) {
                rows[i] |= 1ull << j;
                rows[j] |= 1ull << i;
            }
    return rows;
}

rq_block make_rq_block(int n, std::uint64_t mask, std::size_t atom_count) {
    rq_block b;
    b.n = n;
    b.rq_mask = mask;
    b.rq_rows = rq_rows_from_mask(n, mask);
    b.comps = components_bits(n, b.rq_rows);
    b.closed = closed_set_bits(n, b.rq_rows);
    b.rm_count = 1ull << (b.comps.count * n);
    b.val_count = 1;
    for (std::size_t a = 0; a < atom_count; ++a) b.val_count *= b.closed.size();
    return b;
}

std::vector<std::uint64_t> rm_rows_from_index(const rq_block& b, std::uint64_t rm_index) {
    std::vector<std::uint64_t> rows(b.n, 0);
    std::uint64_t digit_mask = (1ull << b.comps.count) - 1;
    for (int l = 0; l < b.n; ++l) {
        std::uint64_t digit = (rm_index >> (l * b.comps.count)) & digit_mask;
        std::uint64_t column = 0;
        for (std::uint64_t bits = digit; bits; bits &= bits - 1)
            column |= b.comps.masks[std::countr_zero(bits)];
        for (std::uint64_t bits = column; bits; bits &= bits - 1)
            rows[std::countr_zero(bits)] |= 1ull << l;
    }
    return rows;
}

std::uint64_t val_digit_bits(const rq_block& b, std::uint64_t val_index, int pos) {
    std::uint64_t k = b.closed.size();
    for (int t = 0; t < pos; ++t) val_index /= k;
    return b.closed[val_index % k];
}

structure materialize(const rq_block& b, std::span<const std::uint64_t> rm_rows,
                      const std::vector<std::string>& atoms, std::uint64_t val_index) {
    std::map<std::string, world_set> valuation;
    for (std::size_t pos = 0; pos < atoms.size(); ++pos)
        valuation.emplace(atoms[pos],
                          world_set::from_bits(
                              b.n, val_digit_bits(b, val_index, static_cast<int>(pos))));
    return structure(relation::from_rows(b.n, b.rq_rows),
                     relation::from_rows(b.n, rm_rows), std::move(valuation));
}

}  // namespace qml
