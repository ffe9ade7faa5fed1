#include "qml/search.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <random>

#include "qml/enumeration.hpp"

namespace qml {

namespace {

std::vector<std::string> normalized_atoms(const std::vector<std::string>& atoms) {
    std::vector<std::string> out = atoms;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    for (const std::string& a : out)
        if (a.empty()) throw error("empty atom name in a search budget");
    return out;
}

void check_budget(const search_budget& b) {
    if (b.max_worlds < 1) throw error("search budget needs at least one world");
    if (b.random) {
        if (b.max_worlds > k_random_worlds_cap)
            throw error("random search is capped at " + std::to_string(k_random_worlds_cap) +
                        " worlds, got " + std::to_string(b.max_worlds));
    } else if (b.max_worlds > k_exhaustive_cap) {
        throw error("exhaustive search is capped at " + std::to_string(k_exhaustive_cap) +
                    " worlds, got " + std::to_string(b.max_worlds));
    }
}

bool stream_exhaustive(const search_budget& budget,
                       const std::function<bool(const structure&, const canonical_key&)>& visit) {
    std::vector<std::string> atoms = normalized_atoms(budget.atoms);
    for (int n = 1; n <= budget.max_worlds; ++n) {
        std::uint64_t mask_count = 1ull << world_pair_count(n);
        for (std::uint64_t mask = 0; mask < mask_count; ++mask) {
            rq_block ctx = make_rq_block(n, mask, atoms.size());
            for (std::uint64_t rm = 0; rm < ctx.rm_count; ++rm) {
                std::vector<std::uint64_t> rm_rows = rm_rows_from_index(ctx, rm);
                for (std::uint64_t val = 0; val < ctx.val_count; ++val) {
                    canonical_key key{n, mask, rm, val};
                    if (!visit(materialize(ctx, rm_rows, atoms, val), key)) return false;
                }
            }
        }
    }
    return true;
}

bool stream_random(const search_budget& budget,
                   const std::function<bool(const structure&, const canonical_key&)>& visit) {
    std::vector<std::string> atoms = normalized_atoms(budget.atoms);
    std::mt19937_64 rng(budget.seed);
    for (std::uint64_t s = 0; s < budget.samples; ++s) {
        int n = static_cast<int>(rng() % budget.max_worlds) + 1;
        std::vector<std::uint64_t> rq_rows(n);
        for (int i = 0; i < n; ++i) rq_rows[i] = 1ull << i;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng() & 1) {
                    rq_rows[i] |= 1ull << j;
                    rq_rows[j] |= 1ull << i;
                }
        component_partition comps = components_bits(n, rq_rows);
        std::vector<std::uint64_t> rm_rows(n, 0);
        for (int l = 0; l < n; ++l) {
            std::uint64_t digit = rng() & ((1ull << comps.count) - 1);
            std::uint64_t column = 0;
            for (std::uint64_t b = digit; b; b &= b - 1)
                column |= comps.masks[std::countr_zero(b)];
            for (std::uint64_t b = column; b; b &= b - 1)
                rm_rows[std::countr_zero(b)] |= 1ull << l;
        }
        // Valuations are closures of uniform subsets: always closed, every
        // closed set reachable, larger sets favoured.
        std::map<std::string, world_set> valuation;
        for (const std::string& a : atoms)
            valuation.emplace(a, world_set::from_bits(
                                     n, biortho_bits(n, rq_rows, rng() & full_mask(n))));
        structure s_built(relation::from_rows(n, rq_rows), relation::from_rows(n, rm_rows),
                          std::move(valuation));
        if (!visit(s_built, canonical_key{n, 0, 0, 0})) return false;
    }
    return true;
}

}  // namespace

search_budget search_budget::exhaustive(int max_worlds, std::vector<std::string> atoms) {
    search_budget b;
    b.max_worlds = max_worlds;
    b.atoms = std::move(atoms);
    check_budget(b);
    return b;
}

search_budget search_budget::randomized(int max_worlds, std::vector<std::string> atoms,
                                        std::uint64_t seed, std::uint64_t samples) {
    search_budget b;
    b.max_worlds = max_worlds;
    b.atoms = std::move(atoms);
    b.random = true;
    b.seed = seed;
    b.samples = samples;
    check_budget(b);
    return b;
}

void for_each_structure(const search_budget& budget,
                        const std::function<bool(const structure&, const canonical_key&)>& visit) {
    check_budget(budget);
    if (budget.random)
        stream_random(budget, visit);
    else
        stream_exhaustive(budget, visit);
}

std::uint64_t count_structures(const search_budget& budget) {
    check_budget(budget);
    if (budget.random) return budget.samples;
    std::vector<std::string> atoms = normalized_atoms(budget.atoms);
    unsigned __int128 total = 0;
    for (int n = 1; n <= budget.max_worlds; ++n) {
        std::uint64_t mask_count = 1ull << world_pair_count(n);
        for (std::uint64_t mask = 0; mask < mask_count; ++mask) {
            rq_block ctx = make_rq_block(n, mask, atoms.size());
            total += static_cast<unsigned __int128>(ctx.rm_count) * ctx.val_count;
        }
    }
    if (total > ~0ull) throw error("structure count exceeds 64 bits");
    return static_cast<std::uint64_t>(total);
}

namespace {

// Kernel-side query: arena ids for the gamma formulas and the optional
// alpha.  alpha_id == -1 means "refute nothing", used by the empty-delta
// witness search where any gamma world settles it.
struct query_ids {
    formula_table table;
    std::vector<int> gamma_ids;
    int alpha_id = -1;
    bool modal = false;

    explicit query_ids(const formula_set& gamma, const formula* alpha,
                       const std::vector<std::string>& budget_atoms)
        : table([&] {
              std::vector<std::string> names = budget_atoms;
              for (const std::string& a : atom_names(gamma))
                  names.push_back(a);
              if (alpha)
                  for (const std::string& a : atom_names(*alpha)) names.push_back(a);
              return names;
          }()) {
        for (const formula& g : gamma) {
            int id = table.intern(g);
            gamma_ids.push_back(id);
            modal = modal || table.modal(id);
        }
        if (alpha) {
            alpha_id = table.intern(*alpha);
            modal = modal || table.modal(alpha_id);
        }
    }

    std::uint64_t witness(const std::uint64_t* out, int n) const {
        std::uint64_t w = full_mask(n);
        for (int id : gamma_ids) w &= out[id];
        if (alpha_id >= 0) w &= ~out[alpha_id];
        return w;
    }
};

struct kernel_hit {
    std::uint64_t rm = 0;
    std::uint64_t val = 0;
    bool found = false;
};

// Countermodel search over one rq context, returning the canonically
// first (rm, val) whose structure has a witness world.  The plain sweep
// of the formula table depends only on the valuation, so its results are
// cached per val and only the modal sweep runs per (rm, val).
kernel_hit scan_context(const rq_block& ctx, const query_ids& q,
                        const std::vector<int>& slot_pos) {
    int n = ctx.n;
    int size = q.table.size();
    auto fill_atom_bits = [&](std::uint64_t val, std::vector<std::uint64_t>& bits) {
        for (std::size_t s = 0; s < slot_pos.size(); ++s)
            bits[s] = slot_pos[s] < 0 ? 0 : val_digit_bits(ctx, val, slot_pos[s]);
    };

    kernel_hit hit;
    std::vector<std::uint64_t> atom_bits(slot_pos.size());

    if (!q.modal) {
        // rm never matters: the first hit is at rm 0 and the smallest
        // hitting val.
        std::vector<std::uint64_t> out(size);
        std::vector<std::uint64_t> rm_zero(n, 0);
        frame_view fv{n, ctx.rq_rows.data(), rm_zero.data(), atom_bits.data()};
        for (std::uint64_t val = 0; val < ctx.val_count; ++val) {
            fill_atom_bits(val, atom_bits);
            q.table.evaluate(fv, out.data());
            if (q.witness(out.data(), n)) {
                hit = {0, val, true};
                break;
            }
        }
        return hit;
    }

    // Cache the plain sweep per val unless that would be oversized; the
    // modal sweep then runs over a copy.
    bool cache_plain = ctx.val_count * static_cast<std::uint64_t>(size) <= (1ull << 24);
    std::vector<std::vector<std::uint64_t>> plain;
    if (cache_plain) {
        plain.assign(ctx.val_count, std::vector<std::uint64_t>(size));
        std::vector<std::uint64_t> rm_zero(n, 0);
        frame_view fv{n, ctx.rq_rows.data(), rm_zero.data(), atom_bits.data()};
        for (std::uint64_t val = 0; val < ctx.val_count; ++val) {
            fill_atom_bits(val, atom_bits);
            q.table.evaluate_plain(fv, plain[val].data());
        }
    }

    std::atomic<std::uint64_t> best_rm{~0ull};
    std::int64_t rm_count = static_cast<std::int64_t>(ctx.rm_count);
#pragma omp parallel
    {
        std::vector<std::uint64_t> bits(slot_pos.size());
        std::vector<std::uint64_t> out(size);
#pragma omp for schedule(dynamic, 64)
        for (std::int64_t rm = 0; rm < rm_count; ++rm) {
            std::uint64_t urm = static_cast<std::uint64_t>(rm);
            if (urm > best_rm.load(std::memory_order_relaxed)) continue;
            std::vector<std::uint64_t> rm_rows = rm_rows_from_index(ctx, urm);
            frame_view fv{n, ctx.rq_rows.data(), rm_rows.data(), bits.data()};
            for (std::uint64_t val = 0; val < ctx.val_count; ++val) {
                fill_atom_bits(val, bits);
                if (cache_plain)
                    std::copy(plain[val].begin(), plain[val].end(), out.begin());
                else
                    q.table.evaluate_plain(fv, out.data());
                q.table.evaluate_modal(fv, out.data());
                if (!q.witness(out.data(), n)) continue;
#pragma omp critical
                {
                    if (!hit.found || urm < hit.rm) {
                        hit = {urm, val, true};
                        best_rm.store(urm, std::memory_order_relaxed);
                    }
                }
                break;  // vals ascend, the first hit per rm is the one
            }
        }
    }
    return hit;
}

std::optional<countermodel> kernel_search(const formula_set& gamma, const formula* alpha,
                                          const search_budget& budget) {
    check_budget(budget);
    std::vector<std::string> atoms = normalized_atoms(budget.atoms);
    query_ids q(gamma, alpha, atoms);

    // Map table atom slots to valuation digit positions; atoms the budget
    // does not enumerate stay false everywhere.
    std::vector<int> slot_pos;
    for (const std::string& a : q.table.atoms()) {
        auto it = std::lower_bound(atoms.begin(), atoms.end(), a);
        slot_pos.push_back(it != atoms.end() && *it == a
                               ? static_cast<int>(it - atoms.begin())
                               : -1);
    }

    auto package = [&](const rq_block& ctx, std::uint64_t rm, std::uint64_t val) {
        std::vector<std::uint64_t> rm_rows = rm_rows_from_index(ctx, rm);
        structure s = materialize(ctx, rm_rows, atoms, val);
        // Recompute the witness with the structure-level evaluator; the
        // smallest witness world is the canonical choice.
        std::uint64_t w = full_mask(ctx.n);
        for (const formula& g : gamma) w &= truth_set(s, g).bits();
        if (alpha) w &= ~truth_set(s, *alpha).bits();
        if (!w) throw error("countermodel kernel and evaluator disagree on a witness");
        return countermodel{std::move(s), std::countr_zero(w),
                            canonical_key{ctx.n, ctx.rq_mask, rm, val}};
    };

    if (budget.random) {
        std::optional<countermodel> found;
        for_each_structure(budget, [&](const structure& s, const canonical_key& key) {
            std::uint64_t w = full_mask(s.world_count());
            for (const formula& g : gamma) w &= truth_set(s, g).bits();
            if (alpha) w &= ~truth_set(s, *alpha).bits();
            if (!w) return true;
            found = countermodel{s, std::countr_zero(w), key};
            return false;
        });
        return found;
    }

    for (int n = 1; n <= budget.max_worlds; ++n) {
        std::uint64_t mask_count = 1ull << world_pair_count(n);
        for (std::uint64_t mask = 0; mask < mask_count; ++mask) {
            rq_block ctx = make_rq_block(n, mask, atoms.size());
            kernel_hit hit = scan_context(ctx, q, slot_pos);
            if (hit.found) return package(ctx, hit.rm, hit.val);
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<countermodel> find_countermodel(const formula_set& gamma, const formula& alpha,
                                              const search_budget& budget) {
    return kernel_search(gamma, &alpha, budget);
}

std::optional<countermodel> find_countermodel_serial(const formula_set& gamma,
                                                     const formula& alpha,
                                                     const search_budget& budget) {
    std::optional<countermodel> found;
    for_each_structure(budget, [&](const structure& s, const canonical_key& key) {
        for (int i = 0; i < s.world_count(); ++i) {
            bool sat = true;
            for (const formula& g : gamma)
                if (!holds(s, i, g)) {
                    sat = false;
                    break;
                }
            if (!sat || holds(s, i, alpha)) continue;
            found = countermodel{s, i, key};
            return false;
        }
        return true;
    });
    return found;
}

std::optional<refutation> refute_entailment(const entailment_query& q,
                                            const search_budget& budget,
                                            formula* survivor) {
    refutation out;
    if (q.delta.empty()) {
        out.gamma_witness = kernel_search(q.gamma, nullptr, budget);
        if (!out.gamma_witness) return std::nullopt;
        return out;
    }
    for (const formula& alpha : q.delta) {
        auto cm = find_countermodel(q.gamma, alpha, budget);
        if (!cm) {
            if (survivor) *survivor = alpha;
            return std::nullopt;
        }
        out.per_formula.emplace_back(alpha, std::move(*cm));
    }
    return out;
}

}  // namespace qml
