#include "qml/frame.hpp"

#include <algorithm>
#include <bit>
#include <ostream>
#include <set>

namespace qml {

world_set::world_set(int world_count) : n_(world_count) {
    if (world_count < 0 || world_count > k_max_worlds)
        throw error("world count must be between 0 and " + std::to_string(k_max_worlds));
}

world_set world_set::from_bits(int world_count, std::uint64_t bits) {
    world_set s(world_count);
    if (bits & ~full_mask(world_count))
        throw error("world set bits exceed the world count");
    s.bits_ = bits;
    return s;
}

world_set world_set::full(int world_count) {
    return from_bits(world_count, full_mask(world_count));
}

world_set world_set::single(int world_count, int i) {
    world_set s(world_count);
    s.add(i);
    return s;
}

int world_set::size() const {
    return std::popcount(bits_);
}

void world_set::check_index(int i) const {
    if (i < 0 || i >= n_)
        throw error("world index " + std::to_string(i) + " out of range for " +
                    std::to_string(n_) + " worlds");
}

void world_set::check_same(const world_set& other) const {
    if (n_ != other.n_)
        throw error("world sets from structures of different sizes (" +
                    std::to_string(n_) + " vs " + std::to_string(other.n_) + ")");
}

bool world_set::contains(int i) const {
    check_index(i);
    return bits_ >> i & 1;
}

world_set& world_set::add(int i) {
    check_index(i);
    bits_ |= 1ull << i;
    return *this;
}

world_set& world_set::remove(int i) {
    check_index(i);
    bits_ &= ~(1ull << i);
    return *this;
}

world_set world_set::united(const world_set& other) const {
    check_same(other);
    return from_bits(n_, bits_ | other.bits_);
}

world_set world_set::intersected(const world_set& other) const {
    check_same(other);
    return from_bits(n_, bits_ & other.bits_);
}

world_set world_set::minus(const world_set& other) const {
    check_same(other);
    return from_bits(n_, bits_ & ~other.bits_);
}

world_set world_set::complemented() const {
    return from_bits(n_, ~bits_ & full_mask(n_));
}

bool world_set::subset_of(const world_set& other) const {
    check_same(other);
    return (bits_ & ~other.bits_) == 0;
}

std::vector<int> world_set::members() const {
    std::vector<int> out;
    for (std::uint64_t b = bits_; b; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
}

relation::relation(int world_count) : n_(world_count), rows_(world_count, 0) {
    if (world_count < 0 || world_count > k_max_worlds)
        throw error("world count must be between 0 and " + std::to_string(k_max_worlds));
}

relation relation::identity(int world_count) {
    relation r(world_count);
    for (int i = 0; i < world_count; ++i) r.set(i, i);
    return r;
}

relation relation::total(int world_count) {
    relation r(world_count);
    for (int i = 0; i < world_count; ++i) r.rows_[i] = full_mask(world_count);
    return r;
}

relation relation::from_pairs(int world_count,
                              const std::vector<std::pair<int, int>>& pairs) {
    relation r(world_count);
    for (auto [i, j] : pairs) r.set(i, j);
    return r;
}

relation relation::from_rows(int world_count, std::span<const std::uint64_t> rows) {
    relation r(world_count);
    if (static_cast<int>(rows.size()) != world_count)
        throw error("expected " + std::to_string(world_count) + " relation rows, got " +
                    std::to_string(rows.size()));
    for (int i = 0; i < world_count; ++i) {
        if (rows[i] & ~full_mask(world_count))
            throw error("relation row " + std::to_string(i) + " exceeds the world count");
        r.rows_[i] = rows[i];
    }
    return r;
}

void relation::check_index(int i) const {
    if (i < 0 || i >= n_)
        throw error("world index " + std::to_string(i) + " out of range for " +
                    std::to_string(n_) + " worlds");
}

bool relation::at(int i, int j) const {
    check_index(i);
    check_index(j);
    return rows_[i] >> j & 1;
}

void relation::set(int i, int j, bool value) {
    check_index(i);
    check_index(j);
    if (value)
        rows_[i] |= 1ull << j;
    else
        rows_[i] &= ~(1ull << j);
}

void relation::link(int i, int j) {
    set(i, j);
    set(j, i);
}

std::uint64_t relation::row_bits(int i) const {
    check_index(i);
    return rows_[i];
}

world_set relation::row(int i) const {
    return world_set::from_bits(n_, row_bits(i));
}

world_set relation::column(int j) const {
    check_index(j);
    world_set out(n_);
    for (int i = 0; i < n_; ++i)
        if (rows_[i] >> j & 1) out.add(i);
    return out;
}

bool relation::reflexive() const {
    for (int i = 0; i < n_; ++i)
        if (!(rows_[i] >> i & 1)) return false;
    return true;
}

bool relation::symmetric() const {
    for (int i = 0; i < n_; ++i)
        for (std::uint64_t b = rows_[i]; b; b &= b - 1)
            if (!(rows_[std::countr_zero(b)] >> i & 1)) return false;
    return true;
}

bool relation::transitive() const {
    for (int i = 0; i < n_; ++i)
        for (std::uint64_t b = rows_[i]; b; b &= b - 1)
            if (rows_[std::countr_zero(b)] & ~rows_[i]) return false;
    return true;
}

std::string violation::message() const {
    switch (what) {
        case code::not_reflexive:
            return "rq is not reflexive: missing (" + std::to_string(i) + ", " +
                   std::to_string(i) + ")";
        case code::not_symmetric:
            return "rq is not symmetric: has (" + std::to_string(i) + ", " +
                   std::to_string(j) + ") but not the converse";
        case code::forcing:
            return "rm is not forced along rq: rm(" + std::to_string(i) + ", " +
                   std::to_string(l) + ") and rq(" + std::to_string(i) + ", " +
                   std::to_string(j) + ") but not rm(" + std::to_string(j) + ", " +
                   std::to_string(l) + ")";
        case code::valuation_not_closed:
            return "valuation of '" + atom + "' is not closed under double ortho";
    }
    return "unknown violation";
}

std::ostream& operator<<(std::ostream& os, const violation& v) {
    return os << v.message();
}

structure::structure(relation rq, relation rm,
                     std::map<std::string, world_set> valuation,
                     std::vector<std::string> world_names)
    : n_(rq.world_count()),
      rq_(std::move(rq)),
      rm_(std::move(rm)),
      valuation_(std::move(valuation)),
      names_(std::move(world_names)) {
    if (n_ < 1) throw error("a structure needs at least one world");
    if (rm_.world_count() != n_)
        throw error("rq and rm disagree on the world count (" + std::to_string(n_) +
                    " vs " + std::to_string(rm_.world_count()) + ")");
    for (const auto& [atom, worlds] : valuation_) {
        if (atom.empty()) throw error("valuation has an empty atom name");
        if (worlds.world_count() != n_)
            throw error("valuation of '" + atom + "' sized for " +
                        std::to_string(worlds.world_count()) + " worlds, structure has " +
                        std::to_string(n_));
    }
    if (names_.empty()) {
        names_.reserve(n_);
        for (int i = 0; i < n_; ++i) names_.push_back("w" + std::to_string(i));
    }
    if (static_cast<int>(names_.size()) != n_)
        throw error("expected " + std::to_string(n_) + " world names, got " +
                    std::to_string(names_.size()));
    std::set<std::string_view> seen;
    for (const std::string& name : names_)
        if (!seen.insert(name).second)
            throw error("duplicate world name '" + name + "'");
}

const world_set* structure::atom_truth(std::string_view atom) const {
    auto it = valuation_.find(std::string(atom));
    return it == valuation_.end() ? nullptr : &it->second;
}

const std::string& structure::world_name(int i) const {
    if (i < 0 || i >= n_)
        throw error("world index " + std::to_string(i) + " out of range for " +
                    std::to_string(n_) + " worlds");
    return names_[i];
}

int structure::world_index(std::string_view name) const {
    for (int i = 0; i < n_; ++i)
        if (names_[i] == name) return i;
    return -1;
}

std::vector<violation> structure::validate() const {
    std::vector<violation> out;
    for (int i = 0; i < n_; ++i)
        if (!rq_.at(i, i))
            out.push_back({violation::code::not_reflexive, i, -1, -1, {}});
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            if (rq_.at(i, j) && !rq_.at(j, i))
                out.push_back({violation::code::not_symmetric, i, j, -1, {}});
    for (int i = 0; i < n_; ++i)
        for (int l = 0; l < n_; ++l) {
            if (!rm_.at(i, l)) continue;
            for (int j = 0; j < n_; ++j)
                if (rq_.at(i, j) && !rm_.at(j, l))
                    out.push_back({violation::code::forcing, i, j, l, {}});
        }
    for (const auto& [atom, worlds] : valuation_) {
        std::uint64_t x = worlds.bits();
        if (biortho_bits(n_, rq_.rows(), x) != x)
            out.push_back({violation::code::valuation_not_closed, -1, -1, -1, atom});
    }
    return out;
}

std::uint64_t ortho_bits(int n, std::span<const std::uint64_t> rq_rows, std::uint64_t x) {
    std::uint64_t out = 0;
    for (int j = 0; j < n; ++j)
        if ((rq_rows[j] & x) == 0) out |= 1ull << j;
    return out;
}

std::uint64_t biortho_bits(int n, std::span<const std::uint64_t> rq_rows, std::uint64_t x) {
    return ortho_bits(n, rq_rows, ortho_bits(n, rq_rows, x));
}

bool forcing_holds_bits(int n, std::span<const std::uint64_t> rq_rows,
                        std::span<const std::uint64_t> rm_rows) {
    // rm(i,l) and rq(i,j) must give rm(j,l): every rq-neighbour j of i
    // needs a row covering i's row.
    for (int i = 0; i < n; ++i)
        for (std::uint64_t b = rq_rows[i]; b; b &= b - 1)
            if (rm_rows[i] & ~rm_rows[std::countr_zero(b)]) return false;
    return true;
}

std::vector<std::uint64_t> closed_set_bits(int n, std::span<const std::uint64_t> rq_rows) {
    if (n > k_subset_guard)
        throw error("closed set enumeration is limited to " +
                    std::to_string(k_subset_guard) + " worlds, got " + std::to_string(n));
    std::vector<std::uint64_t> out;
    for (std::uint64_t x = 0; x <= full_mask(n); ++x) {
        if (biortho_bits(n, rq_rows, x) == x) out.push_back(x);
        if (x == full_mask(n)) break;  // avoid wrap at n == 64
    }
    return out;
}

world_set ortho(const structure& s, const world_set& x) {
    if (x.world_count() != s.world_count())
        throw error("world set sized for " + std::to_string(x.world_count()) +
                    " worlds, structure has " + std::to_string(s.world_count()));
    return world_set::from_bits(s.world_count(),
                                ortho_bits(s.world_count(), s.rq().rows(), x.bits()));
}

world_set biortho(const structure& s, const world_set& x) {
    return ortho(s, ortho(s, x));
}

bool is_closed(const structure& s, const world_set& x) {
    return biortho(s, x) == x;
}

std::vector<world_set> closed_sets(const structure& s) {
    std::vector<world_set> out;
    for (std::uint64_t bits : closed_set_bits(s.world_count(), s.rq().rows()))
        out.push_back(world_set::from_bits(s.world_count(), bits));
    return out;
}

component_partition components_bits(int n, std::span<const std::uint64_t> rows) {
    component_partition p;
    p.component_of.assign(n, -1);
    for (int i = 0; i < n; ++i) {
        if (p.component_of[i] != -1) continue;
        // flood fill from the smallest unassigned world
        std::uint64_t comp = 1ull << i;
        std::uint64_t frontier = comp;
        while (frontier) {
            std::uint64_t next = 0;
            for (std::uint64_t b = frontier; b; b &= b - 1)
                next |= rows[std::countr_zero(b)];
            frontier = next & ~comp;
            comp |= next;
        }
        int id = p.count++;
        p.masks.push_back(comp);
        for (std::uint64_t b = comp; b; b &= b - 1) p.component_of[std::countr_zero(b)] = id;
    }
    return p;
}

component_partition rq_components(const structure& s) {
    if (!s.rq().reflexive() || !s.rq().symmetric())
        throw error("rq components need a reflexive and symmetric rq");
    return components_bits(s.world_count(), s.rq().rows());
}

bool forcing_by_components(const structure& s) {
    component_partition p = rq_components(s);
    for (int l = 0; l < s.world_count(); ++l) {
        std::uint64_t column = 0;
        for (int i = 0; i < s.world_count(); ++i)
            if (s.rm().at(i, l)) column |= 1ull << i;
        // a union of components intersects each component fully or not at all
        for (std::uint64_t mask : p.masks) {
            std::uint64_t overlap = column & mask;
            if (overlap != 0 && overlap != mask) return false;
        }
    }
    return true;
}

structure make_alethic(relation rq, std::map<std::string, world_set> valuation,
                       std::vector<std::string> world_names) {
    relation rm = rq;
    return structure(std::move(rq), std::move(rm), std::move(valuation),
                     std::move(world_names));
}

}  // namespace qml
