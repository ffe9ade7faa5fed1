#include "qml/eval.hpp"

#include <algorithm>

namespace qml {

namespace {

std::uint64_t box_bits(int n, const std::uint64_t* rm_rows, std::uint64_t x) {
    std::uint64_t out = 0;
    std::uint64_t outside = ~x & full_mask(n);
    for (int i = 0; i < n; ++i)
        if ((rm_rows[i] & outside) == 0) out |= 1ull << i;
    return out;
}

std::uint64_t truth_bits(const structure& s, const formula& f,
                         std::unordered_map<formula, std::uint64_t, formula_hash>& memo) {
    if (auto it = memo.find(f); it != memo.end()) return it->second;
    int n = s.world_count();
    std::uint64_t out = 0;
    switch (f.node_kind()) {
        case formula::kind::atom: {
            const world_set* ws = s.atom_truth(f.atom_name());
            if (!ws)
                throw error("atom '" + f.atom_name() + "' is not in the structure's valuation");
            out = ws->bits();
            break;
        }
        case formula::kind::conj:
            out = truth_bits(s, f.lhs(), memo) & truth_bits(s, f.rhs(), memo);
            break;
        case formula::kind::neg:
            out = ortho_bits(n, s.rq().rows(), truth_bits(s, f.operand(), memo));
            break;
        case formula::kind::box:
            out = box_bits(n, s.rm().rows().data(), truth_bits(s, f.operand(), memo));
            break;
    }
    memo.emplace(f, out);
    return out;
}

}  // namespace

bool holds(const structure& s, int world, const formula& f) {
    if (world < 0 || world >= s.world_count())
        throw error("world index " + std::to_string(world) + " out of range for " +
                    std::to_string(s.world_count()) + " worlds");
    switch (f.node_kind()) {
        case formula::kind::atom: {
            const world_set* ws = s.atom_truth(f.atom_name());
            if (!ws)
                throw error("atom '" + f.atom_name() + "' is not in the structure's valuation");
            return ws->contains(world);
        }
        case formula::kind::conj:
            return holds(s, world, f.lhs()) && holds(s, world, f.rhs());
        case formula::kind::neg: {
            formula a = f.operand();
            for (int j : s.rq().row(world).members())
                if (holds(s, j, a)) return false;
            return true;
        }
        case formula::kind::box: {
            formula a = f.operand();
            for (int l : s.rm().row(world).members())
                if (!holds(s, l, a)) return false;
            return true;
        }
    }
    return false;  // unreachable
}

world_set truth_set(const structure& s, const formula& f) {
    std::unordered_map<formula, std::uint64_t, formula_hash> memo;
    return world_set::from_bits(s.world_count(), truth_bits(s, f, memo));
}

world_set truth_set_naive(const structure& s, const formula& f) {
    world_set out(s.world_count());
    for (int i = 0; i < s.world_count(); ++i)
        if (holds(s, i, f)) out.add(i);
    return out;
}

world_set gamma_worlds(const structure& s, const formula_set& gamma) {
    world_set out = world_set::full(s.world_count());
    for (const formula& g : gamma) out = out.intersected(truth_set(s, g));
    return out;
}

bool entails_in(const structure& s, const entailment_query& q) {
    world_set antecedent = gamma_worlds(s, q.gamma);
    world_set covered(s.world_count());
    for (const formula& d : q.delta) covered = covered.united(truth_set(s, d));
    return antecedent.subset_of(covered);
}

formula_table::formula_table(std::vector<std::string> atoms) : atoms_(std::move(atoms)) {
    std::sort(atoms_.begin(), atoms_.end());
    atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
}

int formula_table::intern(const formula& f) {
    if (auto it = ids_.find(f); it != ids_.end()) return it->second;
    entry e{f.node_kind(), -1, -1, false};
    switch (f.node_kind()) {
        case formula::kind::atom: {
            auto it = std::find(atoms_.begin(), atoms_.end(), f.atom_name());
            if (it == atoms_.end())
                throw error("atom '" + f.atom_name() + "' is not in this table");
            e.a = static_cast<std::int32_t>(it - atoms_.begin());
            break;
        }
        case formula::kind::conj:
            e.a = intern(f.lhs());
            e.b = intern(f.rhs());
            e.modal = entries_[e.a].modal || entries_[e.b].modal;
            break;
        case formula::kind::neg:
            e.a = intern(f.operand());
            e.modal = entries_[e.a].modal;
            break;
        case formula::kind::box:
            e.a = intern(f.operand());
            e.modal = true;
            break;
    }
    int id = static_cast<int>(entries_.size());
    entries_.push_back(e);
    items_.push_back(f);
    ids_.emplace(f, id);
    return id;
}

void formula_table::add_universe(int max_depth) {
    // Grow by depth layers: each layer applies every connective to all
    // formulas built so far whose result lands in the new layer.
    std::vector<formula> pool;
    for (const std::string& a : atoms_) {
        formula f = formula::atom(a);
        intern(f);
        pool.push_back(f);
    }
    for (int d = 1; d <= max_depth; ++d) {
        std::size_t before = pool.size();
        std::vector<formula> grown;
        for (std::size_t i = 0; i < before; ++i) {
            if (pool[i].depth() == d - 1) {
                grown.push_back(formula::neg(pool[i]));
                grown.push_back(formula::box(pool[i]));
            }
            for (std::size_t j = 0; j < before; ++j) {
                int dm = std::max(pool[i].depth(), pool[j].depth());
                if (dm == d - 1) grown.push_back(formula::conj(pool[i], pool[j]));
            }
        }
        for (formula& f : grown) {
            if (id_of(f) == -1) {
                intern(f);
                pool.push_back(std::move(f));
            }
        }
    }
}

int formula_table::id_of(const formula& f) const {
    auto it = ids_.find(f);
    return it == ids_.end() ? -1 : it->second;
}

formula formula_table::formula_of(int id) const {
    if (id < 0 || id >= size()) throw error("formula id " + std::to_string(id) + " out of range");
    return items_[id];
}

void formula_table::evaluate_one(const frame_view& fv, std::uint64_t* out, const entry& e,
                                 std::uint64_t& slot) const {
    switch (e.k) {
        case formula::kind::atom:
            slot = fv.atom_bits[e.a];
            break;
        case formula::kind::conj:
            slot = out[e.a] & out[e.b];
            break;
        case formula::kind::neg:
            slot = ortho_bits(fv.n, {fv.rq_rows, static_cast<std::size_t>(fv.n)}, out[e.a]);
            break;
        case formula::kind::box:
            slot = box_bits(fv.n, fv.rm_rows, out[e.a]);
            break;
    }
}

void formula_table::evaluate(const frame_view& fv, std::uint64_t* out) const {
    for (std::size_t i = 0; i < entries_.size(); ++i)
        evaluate_one(fv, out, entries_[i], out[i]);
}

void formula_table::evaluate_plain(const frame_view& fv, std::uint64_t* out) const {
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (!entries_[i].modal) evaluate_one(fv, out, entries_[i], out[i]);
}

void formula_table::evaluate_modal(const frame_view& fv, std::uint64_t* out) const {
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i].modal) evaluate_one(fv, out, entries_[i], out[i]);
}

frame_data make_frame_data(const structure& s, const formula_table& table) {
    frame_data fd;
    fd.n = s.world_count();
    fd.rq.assign(s.rq().rows().begin(), s.rq().rows().end());
    fd.rm.assign(s.rm().rows().begin(), s.rm().rows().end());
    fd.atom_bits.reserve(table.atoms().size());
    for (const std::string& a : table.atoms()) {
        const world_set* ws = s.atom_truth(a);
        if (!ws) throw error("atom '" + a + "' is not in the structure's valuation");
        fd.atom_bits.push_back(ws->bits());
    }
    return fd;
}

}  // namespace qml
