#include "qml/suites.hpp"

#include <atomic>
#include <bit>
#include <memory>
#include <random>

#include "qml/enumeration.hpp"
#include "qml/eval.hpp"
#include "qml/search.hpp"

namespace qml {

namespace {

std::string key_text(int n, std::uint64_t rq, std::uint64_t rm, std::uint64_t val) {
    return "n=" + std::to_string(n) + " rq=" + std::to_string(rq) +
           " rm=" + std::to_string(rm) + " val=" + std::to_string(val);
}

// First-failure bookkeeping that stays deterministic under the parallel
// rm loop: the smallest (rm, val) wins within a block, and blocks are
// visited in canonical order anyway.
struct failure_slot {
    bool has = false;
    std::uint64_t rm = 0;
    std::uint64_t val = 0;
    std::string message;

    void offer(std::uint64_t r, std::uint64_t v, std::string msg) {
        if (has && (rm < r || (rm == r && val <= v))) return;
        has = true;
        rm = r;
        val = v;
        message = std::move(msg);
    }
};

std::vector<std::string> sorted_atoms(std::vector<std::string> atoms) {
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    return atoms;
}

}  // namespace

scan_stats closedness_scan(int max_worlds, const std::vector<std::string>& atoms,
                           int formula_depth, bool parallel) {
    std::vector<std::string> as = sorted_atoms(atoms);
    formula_table table(as);
    table.add_universe(formula_depth);
    int size = table.size();

    scan_stats stats;
    for (int n = 1; n <= max_worlds; ++n) {
        std::uint64_t mask_count = 1ull << world_pair_count(n);
        for (std::uint64_t mask = 0; mask < mask_count; ++mask) {
            rq_block blk = make_rq_block(n, mask, as.size());
            stats.structures += blk.rm_count * blk.val_count;

            // Plain truth sets depend only on (rq, val): sweep and check
            // them once, cache for the modal sweeps.
            std::vector<std::vector<std::uint64_t>> plain(
                blk.val_count, std::vector<std::uint64_t>(size));
            std::vector<std::uint64_t> rm_zero(n, 0);
            std::vector<std::uint64_t> bits(as.size());
            for (std::uint64_t val = 0; val < blk.val_count; ++val) {
                for (std::size_t p = 0; p < as.size(); ++p)
                    bits[p] = val_digit_bits(blk, val, static_cast<int>(p));
                frame_view fv{n, blk.rq_rows.data(), rm_zero.data(), bits.data()};
                table.evaluate_plain(fv, plain[val].data());
                for (int id = 0; id < size; ++id) {
                    if (table.modal(id)) continue;
                    ++stats.checks;
                    std::uint64_t x = plain[val][id];
                    if (biortho_bits(n, blk.rq_rows, x) != x) {
                        ++stats.failures;
                        if (stats.first_failure.empty())
                            stats.first_failure =
                                key_text(n, mask, 0, val) + ": truth set of " +
                                print(table.formula_of(id)) + " is not closed";
                    }
                }
            }

            failure_slot first;
            std::uint64_t local_checks = 0;
            std::uint64_t local_failures = 0;
            std::int64_t rm_count = static_cast<std::int64_t>(blk.rm_count);
#pragma omp parallel if (parallel)
            {
                std::vector<std::uint64_t> abits(as.size());
                std::vector<std::uint64_t> out(size);
                failure_slot mine;
                std::uint64_t checks = 0;
                std::uint64_t failures = 0;
#pragma omp for schedule(dynamic, 16)
                for (std::int64_t rm = 0; rm < rm_count; ++rm) {
                    std::vector<std::uint64_t> rm_rows =
                        rm_rows_from_index(blk, static_cast<std::uint64_t>(rm));
                    frame_view fv{n, blk.rq_rows.data(), rm_rows.data(), abits.data()};
                    for (std::uint64_t val = 0; val < blk.val_count; ++val) {
                        for (std::size_t p = 0; p < as.size(); ++p)
                            abits[p] = val_digit_bits(blk, val, static_cast<int>(p));
                        std::copy(plain[val].begin(), plain[val].end(), out.begin());
                        table.evaluate_modal(fv, out.data());
                        for (int id = 0; id < size; ++id) {
                            if (!table.modal(id)) continue;
                            ++checks;
                            std::uint64_t x = out[id];
                            if (biortho_bits(n, blk.rq_rows, x) != x) {
                                ++failures;
                                mine.offer(static_cast<std::uint64_t>(rm), val,
                                           key_text(n, mask, rm, val) + ": truth set of " +
                                               print(table.formula_of(id)) +
                                               " is not closed");
                            }
                        }
                    }
                }
#pragma omp critical
                {
                    local_checks += checks;
                    local_failures += failures;
                    if (mine.has) first.offer(mine.rm, mine.val, mine.message);
                }
            }
            stats.checks += local_checks;
            stats.failures += local_failures;
            if (stats.first_failure.empty() && first.has) stats.first_failure = first.message;
        }
    }
    return stats;
}

scan_stats closedness_scan_naive(int max_worlds, const std::vector<std::string>& atoms,
                                 int formula_depth) {
    std::vector<std::string> as = sorted_atoms(atoms);
    formula_table table(as);
    table.add_universe(formula_depth);
    std::vector<formula> pool;
    for (int id = 0; id < table.size(); ++id) pool.push_back(table.formula_of(id));

    scan_stats stats;
    for_each_structure(search_budget::exhaustive(max_worlds, as),
                       [&](const structure& s, const canonical_key& key) {
                           ++stats.structures;
                           for (const formula& f : pool) {
                               ++stats.checks;
                               if (!is_closed(s, truth_set_naive(s, f))) {
                                   ++stats.failures;
                                   if (stats.first_failure.empty())
                                       stats.first_failure =
                                           key_text(key.n, key.rq_mask, key.rm_index,
                                                    key.val_index) +
                                           ": truth set of " + print(f) + " is not closed";
                               }
                           }
                           return true;
                       });
    return stats;
}

scan_stats box_cover_scan(int max_worlds, const std::vector<std::string>& atoms,
                          int formula_depth, bool parallel) {
    std::vector<std::string> as = sorted_atoms(atoms);
    formula_table table(as);
    table.add_universe(formula_depth);
    int alpha_count = table.size();
    std::vector<std::pair<int, int>> cover;  // ([]a id, ~[]a id) per alpha
    for (int id = 0; id < alpha_count; ++id) {
        formula boxed = formula::box(table.formula_of(id));
        cover.emplace_back(table.intern(boxed), table.intern(formula::neg(boxed)));
    }
    int size = table.size();

    scan_stats stats;
    for (int n = 1; n <= max_worlds; ++n) {
        std::uint64_t full = full_mask(n);
        std::uint64_t mask_count = 1ull << world_pair_count(n);
        for (std::uint64_t mask = 0; mask < mask_count; ++mask) {
            rq_block blk = make_rq_block(n, mask, as.size());
            stats.structures += blk.rm_count * blk.val_count;

            std::vector<std::vector<std::uint64_t>> plain(
                blk.val_count, std::vector<std::uint64_t>(size));
            std::vector<std::uint64_t> rm_zero(n, 0);
            std::vector<std::uint64_t> bits(as.size());
            for (std::uint64_t val = 0; val < blk.val_count; ++val) {
                for (std::size_t p = 0; p < as.size(); ++p)
                    bits[p] = val_digit_bits(blk, val, static_cast<int>(p));
                frame_view fv{n, blk.rq_rows.data(), rm_zero.data(), bits.data()};
                table.evaluate_plain(fv, plain[val].data());
            }

            failure_slot first;
            std::uint64_t local_checks = 0;
            std::uint64_t local_failures = 0;
            std::int64_t rm_count = static_cast<std::int64_t>(blk.rm_count);
#pragma omp parallel if (parallel)
            {
                std::vector<std::uint64_t> abits(as.size());
                std::vector<std::uint64_t> out(size);
                failure_slot mine;
                std::uint64_t checks = 0;
                std::uint64_t failures = 0;
#pragma omp for schedule(dynamic, 16)
                for (std::int64_t rm = 0; rm < rm_count; ++rm) {
                    std::vector<std::uint64_t> rm_rows =
                        rm_rows_from_index(blk, static_cast<std::uint64_t>(rm));
                    frame_view fv{n, blk.rq_rows.data(), rm_rows.data(), abits.data()};
                    for (std::uint64_t val = 0; val < blk.val_count; ++val) {
                        for (std::size_t p = 0; p < as.size(); ++p)
                            abits[p] = val_digit_bits(blk, val, static_cast<int>(p));
                        std::copy(plain[val].begin(), plain[val].end(), out.begin());
                        table.evaluate_modal(fv, out.data());
                        for (std::size_t a = 0; a < cover.size(); ++a) {
                            ++checks;
                            if ((out[cover[a].first] | out[cover[a].second]) != full) {
                                ++failures;
                                mine.offer(static_cast<std::uint64_t>(rm), val,
                                           key_text(n, mask, rm, val) + ": [] and ~[] of " +
                                               print(table.formula_of(
                                                   static_cast<int>(a))) +
                                               " do not cover all worlds");
                            }
                        }
                    }
                }
#pragma omp critical
                {
                    local_checks += checks;
                    local_failures += failures;
                    if (mine.has) first.offer(mine.rm, mine.val, mine.message);
                }
            }
            stats.checks += local_checks;
            stats.failures += local_failures;
            if (stats.first_failure.empty() && first.has) stats.first_failure = first.message;
        }
    }
    return stats;
}

scan_stats forcing_scan(int max_worlds) {
    scan_stats stats;
    for (int n = 1; n <= max_worlds; ++n) {
        std::uint64_t full = full_mask(n);
        std::uint64_t mask_count = 1ull << world_pair_count(n);
        std::uint64_t raw_count = 1ull << (n * n);
        for (std::uint64_t mask = 0; mask < mask_count; ++mask) {
            std::vector<std::uint64_t> rq_rows = rq_rows_from_mask(n, mask);
            component_partition comps = components_bits(n, rq_rows);
            std::vector<std::uint64_t> rm_rows(n);
            for (std::uint64_t raw = 0; raw < raw_count; ++raw) {
                for (int i = 0; i < n; ++i) rm_rows[i] = (raw >> (i * n)) & full;
                ++stats.structures;
                ++stats.checks;
                bool direct = forcing_holds_bits(n, rq_rows, rm_rows);
                bool by_components = true;
                for (int l = 0; l < n && by_components; ++l) {
                    std::uint64_t column = 0;
                    for (int i = 0; i < n; ++i)
                        if (rm_rows[i] >> l & 1) column |= 1ull << i;
                    for (std::uint64_t cm : comps.masks) {
                        std::uint64_t overlap = column & cm;
                        if (overlap != 0 && overlap != cm) {
                            by_components = false;
                            break;
                        }
                    }
                }
                if (direct != by_components) {
                    ++stats.failures;
                    if (stats.first_failure.empty())
                        stats.first_failure =
                            "n=" + std::to_string(n) + " rq=" + std::to_string(mask) +
                            " raw rm=" + std::to_string(raw) +
                            ": pointwise forcing and component columns disagree";
                }
            }
        }
    }
    return stats;
}

scan_stats ortho_laws_scan(int frames, int max_worlds, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    scan_stats stats;
    for (int f = 0; f < frames; ++f) {
        int n = static_cast<int>(rng() % static_cast<std::uint64_t>(max_worlds)) + 1;
        std::vector<std::uint64_t> rows(n);
        for (int i = 0; i < n; ++i) rows[i] = 1ull << i;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng() & 1) {
                    rows[i] |= 1ull << j;
                    rows[j] |= 1ull << i;
                }
        ++stats.structures;
        std::uint64_t full = full_mask(n);
        std::uint64_t x = rng() & full;
        std::uint64_t y = x | (rng() & full);  // x subset of y by construction
        std::uint64_t ox = ortho_bits(n, rows, x);
        std::uint64_t oy = ortho_bits(n, rows, y);
        std::uint64_t bx = ortho_bits(n, rows, ox);

        auto record = [&](bool ok, const char* what) {
            ++stats.checks;
            if (ok) return;
            ++stats.failures;
            if (stats.first_failure.empty())
                stats.first_failure = "frame " + std::to_string(f) + " (n=" +
                                      std::to_string(n) + ", x=" + std::to_string(x) +
                                      ", y=" + std::to_string(y) + "): " + what;
        };
        record((x & ~bx) == 0, "x is not contained in biortho(x)");
        record((oy & ~ox) == 0, "ortho is not antitone");
        record(ortho_bits(n, rows, bx) == ox, "ortho(biortho(x)) differs from ortho(x)");
    }
    return stats;
}

scan_stats alethic_scan(int max_worlds, const std::vector<std::string>& atoms,
                        int formula_depth) {
    std::vector<std::string> as = sorted_atoms(atoms);
    formula_table table(as);
    table.add_universe(formula_depth);
    int alpha_count = table.size();
    struct triple {
        int box, boxbox, diabox;
    };
    std::vector<triple> ids;
    for (int id = 0; id < alpha_count; ++id) {
        formula boxed = formula::box(table.formula_of(id));
        ids.push_back({table.intern(boxed), table.intern(formula::box(boxed)),
                       table.intern(formula::neg(
                           formula::box(formula::neg(boxed))))});
    }
    int size = table.size();

    scan_stats stats;
    for (int n = 1; n <= max_worlds; ++n) {
        std::uint64_t mask_count = 1ull << world_pair_count(n);
        for (std::uint64_t mask = 0; mask < mask_count; ++mask) {
            rq_block blk = make_rq_block(n, mask, as.size());

            // Validity of the rm = rq structure must coincide with rq
            // transitivity; cross-check the two code paths.
            structure probe(relation::from_rows(n, blk.rq_rows),
                            relation::from_rows(n, blk.rq_rows), {});
            bool valid = probe.validate().empty();
            bool transitive = probe.rq().transitive();
            ++stats.checks;
            if (valid != transitive) {
                ++stats.failures;
                if (stats.first_failure.empty())
                    stats.first_failure = "n=" + std::to_string(n) + " rq=" +
                                          std::to_string(mask) +
                                          ": alethic validity and transitivity disagree";
            }
            if (!valid) continue;

            std::vector<std::uint64_t> bits(as.size());
            std::vector<std::uint64_t> out(size);
            for (std::uint64_t val = 0; val < blk.val_count; ++val) {
                ++stats.structures;
                for (std::size_t p = 0; p < as.size(); ++p)
                    bits[p] = val_digit_bits(blk, val, static_cast<int>(p));
                frame_view fv{n, blk.rq_rows.data(), blk.rq_rows.data(), bits.data()};
                table.evaluate(fv, out.data());
                for (std::size_t a = 0; a < ids.size(); ++a) {
                    stats.checks += 2;
                    bool collapse = out[ids[a].boxbox] == out[ids[a].box];
                    bool dia = out[ids[a].diabox] == out[ids[a].box];
                    if (collapse && dia) continue;
                    ++stats.failures;
                    if (stats.first_failure.empty())
                        stats.first_failure =
                            key_text(n, mask, 0, val) + ": iterated boxes of " +
                            print(table.formula_of(static_cast<int>(a))) +
                            " do not collapse";
                }
            }
        }
    }
    return stats;
}

scan_stats diamond_scan(int max_worlds, const std::vector<std::string>& atoms,
                        int formula_depth) {
    std::vector<std::string> as = sorted_atoms(atoms);
    formula_table table(as);
    table.add_universe(formula_depth);
    int alpha_count = table.size();
    std::vector<int> dia_ids;
    for (int id = 0; id < alpha_count; ++id)
        dia_ids.push_back(table.intern(
            formula::neg(formula::box(formula::neg(table.formula_of(id))))));
    int size = table.size();

    scan_stats stats;
    for (int n = 1; n <= max_worlds; ++n) {
        std::uint64_t mask_count = 1ull << world_pair_count(n);
        for (std::uint64_t mask = 0; mask < mask_count; ++mask) {
            rq_block blk = make_rq_block(n, mask, as.size());
            if (!relation::from_rows(n, blk.rq_rows).transitive()) continue;

            std::vector<std::uint64_t> bits(as.size());
            std::vector<std::uint64_t> out(size);
            for (std::uint64_t val = 0; val < blk.val_count; ++val) {
                ++stats.structures;
                for (std::size_t p = 0; p < as.size(); ++p)
                    bits[p] = val_digit_bits(blk, val, static_cast<int>(p));
                frame_view fv{n, blk.rq_rows.data(), blk.rq_rows.data(), bits.data()};
                table.evaluate(fv, out.data());
                for (int a = 0; a < alpha_count; ++a) {
                    ++stats.checks;
                    std::uint64_t image = 0;
                    for (int i = 0; i < n; ++i)
                        if (blk.rq_rows[i] & out[a]) image |= 1ull << i;
                    if (out[dia_ids[a]] != image) {
                        ++stats.failures;
                        if (stats.first_failure.empty())
                            stats.first_failure =
                                key_text(n, mask, 0, val) + ": <> of " +
                                print(table.formula_of(a)) +
                                " differs from the successor image";
                    }
                }
            }
        }
    }
    return stats;
}

std::vector<soundness_outcome> soundness_scan(std::span<const soundness_entry> entries,
                                              int max_worlds, bool parallel) {
    // Pool the atoms so one pass over the structure stream serves every
    // entry; formulas over fewer atoms ignore the extra valuations.
    std::vector<std::string> as;
    for (const soundness_entry& e : entries) {
        for (const std::string& a : atom_names(e.conclusion.left)) as.push_back(a);
        for (const std::string& a : atom_names(e.conclusion.right)) as.push_back(a);
    }
    as = sorted_atoms(as);
    formula_table table(as);

    // One flag per (entry, right-side formula); entries with an empty
    // right side get a single flag for "some world satisfies the left".
    struct check_item {
        int entry;
        int alpha_pos;              // -1 for the empty-right case
        std::vector<int> gamma_ids;
        int alpha_id;               // -1 for the empty-right case
        int flag;
    };
    std::vector<check_item> items;
    int flag_count = 0;
    for (std::size_t e = 0; e < entries.size(); ++e) {
        std::vector<int> gids;
        for (const formula& g : entries[e].conclusion.left) gids.push_back(table.intern(g));
        const formula_set& delta = entries[e].conclusion.right;
        if (delta.empty()) {
            items.push_back({static_cast<int>(e), -1, gids, -1, flag_count++});
        } else {
            for (std::size_t a = 0; a < delta.size(); ++a)
                items.push_back({static_cast<int>(e), static_cast<int>(a), gids,
                                 table.intern(delta[a]), flag_count++});
        }
    }
    int size = table.size();
    auto flags = std::make_unique<std::atomic<bool>[]>(flag_count);
    for (int i = 0; i < flag_count; ++i) flags[i].store(false, std::memory_order_relaxed);

    for (int n = 1; n <= max_worlds; ++n) {
        std::uint64_t full = full_mask(n);
        std::uint64_t mask_count = 1ull << world_pair_count(n);
        for (std::uint64_t mask = 0; mask < mask_count; ++mask) {
            rq_block blk = make_rq_block(n, mask, as.size());

            std::vector<std::vector<std::uint64_t>> plain(
                blk.val_count, std::vector<std::uint64_t>(size));
            std::vector<std::uint64_t> rm_zero(n, 0);
            std::vector<std::uint64_t> bits(as.size());
            for (std::uint64_t val = 0; val < blk.val_count; ++val) {
                for (std::size_t p = 0; p < as.size(); ++p)
                    bits[p] = val_digit_bits(blk, val, static_cast<int>(p));
                frame_view fv{n, blk.rq_rows.data(), rm_zero.data(), bits.data()};
                table.evaluate_plain(fv, plain[val].data());
            }

            std::int64_t rm_count = static_cast<std::int64_t>(blk.rm_count);
#pragma omp parallel if (parallel)
            {
                std::vector<std::uint64_t> abits(as.size());
                std::vector<std::uint64_t> out(size);
#pragma omp for schedule(dynamic, 16)
                for (std::int64_t rm = 0; rm < rm_count; ++rm) {
                    std::vector<std::uint64_t> rm_rows =
                        rm_rows_from_index(blk, static_cast<std::uint64_t>(rm));
                    frame_view fv{n, blk.rq_rows.data(), rm_rows.data(), abits.data()};
                    for (std::uint64_t val = 0; val < blk.val_count; ++val) {
                        for (std::size_t p = 0; p < as.size(); ++p)
                            abits[p] = val_digit_bits(blk, val, static_cast<int>(p));
                        std::copy(plain[val].begin(), plain[val].end(), out.begin());
                        table.evaluate_modal(fv, out.data());
                        for (const check_item& it : items) {
                            if (flags[it.flag].load(std::memory_order_relaxed)) continue;
                            std::uint64_t wit = full;
                            for (int gid : it.gamma_ids) wit &= out[gid];
                            if (it.alpha_id >= 0) wit &= ~out[it.alpha_id];
                            if (wit)
                                flags[it.flag].store(true, std::memory_order_relaxed);
                        }
                    }
                }
            }
        }
    }

    std::vector<soundness_outcome> outcomes;
    for (std::size_t e = 0; e < entries.size(); ++e) {
        soundness_outcome o;
        o.name = entries[e].name;
        const formula_set& delta = entries[e].conclusion.right;
        if (delta.empty()) {
            bool witnessed = false;
            for (const check_item& it : items)
                if (it.entry == static_cast<int>(e))
                    witnessed = flags[it.flag].load(std::memory_order_relaxed);
            o.refuted = witnessed;
            o.left_unsatisfiable = !witnessed;
        } else {
            for (const check_item& it : items) {
                if (it.entry != static_cast<int>(e)) continue;
                if (!flags[it.flag].load(std::memory_order_relaxed))
                    o.standing.push_back(delta[it.alpha_pos]);
            }
            o.refuted = o.standing.empty();
        }
        outcomes.push_back(std::move(o));
    }
    return outcomes;
}

}  // namespace qml
