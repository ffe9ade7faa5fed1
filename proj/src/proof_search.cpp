#include <algorithm>
#include <map>
#include <utility>

#include "qml/calculus.hpp"

namespace qml {

namespace {

// Backward search engine.  Candidate premises are generated per rule and
// then verified with check_rule before recursing, so the generator can
// only miss proofs, never produce an invalid one.
class prover {
public:
    prover(const sequent& goal, const proof_search_options& opts) : opts_(opts) {
        if (opts_.cuts == cut_policy::analytic) root_pool_ = cut_pool(goal);
    }

    // Iterative deepening; failed_ records "no proof within height d" facts
    // that stay valid across iterations, so deepening re-explores little.
    std::optional<derivation> run(const sequent& goal) {
        for (int d = 1; d <= opts_.depth_limit; ++d)
            if (auto found = prove(goal, d)) return found;
        return std::nullopt;
    }

private:
    // Subformulas of both sides plus their single negations, the pool of
    // admissible cut formulas.
    static std::vector<formula> cut_pool(const sequent& s) {
        formula_set subs;
        for (const formula& f : s.left) subs = subs.united(subformulas(f));
        for (const formula& f : s.right) subs = subs.united(subformulas(f));
        std::vector<formula> pool(subs.begin(), subs.end());
        for (const formula& f : subs) pool.push_back(formula::neg(f));
        formula_set dedup(std::move(pool));
        return {dedup.begin(), dedup.end()};
    }

    // Wrap a finished subproof in one weakening step when the goal is
    // strictly larger than what the subproof concludes.
    static derivation weaken_to(derivation d, const sequent& goal) {
        if (d.conclusion == goal) return d;
        return {goal, {rule::wkn, {}}, {std::move(d)}};
    }

    std::optional<derivation> attach(const sequent& goal, rule_instance inst,
                                     std::vector<sequent> premises, int depth) {
        if (!check_rule(goal, inst, premises, nullptr)) return std::nullopt;
        std::vector<derivation> proved;
        proved.reserve(premises.size());
        for (const sequent& p : premises) {
            auto sub = prove(p, depth - 1);
            if (!sub) return std::nullopt;
            proved.push_back(std::move(*sub));
        }
        return derivation{goal, std::move(inst), std::move(proved)};
    }

    std::optional<derivation> prove(const sequent& goal, int depth) {
        if (auto it = proved_.find(goal); it != proved_.end()) return it->second;
        if (depth <= 0 || nodes_ >= opts_.node_limit) return std::nullopt;
        if (auto it = failed_.find(goal); it != failed_.end() && it->second >= depth)
            return std::nullopt;
        ++nodes_;

        std::optional<derivation> found = try_rules(goal, depth);
        if (found) {
            proved_.emplace(goal, *found);
            return found;
        }
        auto [it, inserted] = failed_.emplace(goal, depth);
        if (!inserted) it->second = std::max(it->second, depth);
        return std::nullopt;
    }

    std::optional<derivation> try_rules(const sequent& goal, int depth) {
        const formula_set& left = goal.left;
        const formula_set& right = goal.right;

        // Leaves, folded through one weakening when the goal is larger.
        for (const formula& f : left)
            if (right.contains(f)) {
                derivation d = weaken_to(ax(f), goal);
                if (d.conclusion == goal && (depth >= 2 || d.premises.empty()))
                    return d;
            }
        for (const formula& f : right) {
            if (!f.is(formula::kind::box)) continue;
            formula na = formula::neg(f);
            if (!right.contains(na)) continue;
            derivation d = weaken_to(mem(left, f.operand()), goal);
            if (depth >= 2 || d.premises.empty()) return d;
        }

        // Right conjunction.
        for (const formula& f : right) {
            if (!f.is(formula::kind::conj)) continue;
            formula_set rest = right.without(f);
            if (auto d = attach(goal, {rule::conj_r, {}},
                                {{left, rest.with(f.lhs())}, {left, rest.with(f.rhs())}},
                                depth))
                return d;
        }

        // Left conjunction: replace the conjunction by one conjunct, both
        // dropping and keeping the conjunction itself.
        for (const formula& f : left) {
            if (!f.is(formula::kind::conj)) continue;
            formula a = f.lhs();
            formula b = f.rhs();
            for (const formula_set& base : {left.without(f), left}) {
                if (auto d = attach(goal, {rule::conj_l1, {a, b}}, {{base.with(a), right}},
                                    depth))
                    return d;
                if (auto d = attach(goal, {rule::conj_l2, {a, b}}, {{base.with(b), right}},
                                    depth))
                    return d;
            }
        }

        // Double negations on either side.
        for (const formula& f : left) {
            if (!f.is(formula::kind::neg) || !f.operand().is(formula::kind::neg)) continue;
            formula a = f.operand().operand();
            for (const formula_set& base : {left.without(f), left})
                if (auto d = attach(goal, {rule::negneg_l, {a}}, {{base.with(a), right}},
                                    depth))
                    return d;
        }
        for (const formula& f : right) {
            if (!f.is(formula::kind::neg) || !f.operand().is(formula::kind::neg)) continue;
            formula a = f.operand().operand();
            for (const formula_set& base : {right.without(f), right})
                if (auto d = attach(goal, {rule::negneg_r, {a}}, {{left, base.with(a)}},
                                    depth))
                    return d;
        }

        // Left negation: move the operand back to the right.
        for (const formula& f : left) {
            if (!f.is(formula::kind::neg)) continue;
            formula a = f.operand();
            for (const formula_set& base : {left.without(f), left})
                if (auto d = attach(goal, {rule::neg_l, {a}}, {{base, right.with(a)}},
                                    depth))
                    return d;
        }

        // K through one weakening: pick a boxed goal formula, keep only
        // the boxed left formulas, strip the boxes.
        for (const formula& f : right) {
            if (!f.is(formula::kind::box)) continue;
            std::vector<formula> stripped;
            for (const formula& g : left)
                if (g.is(formula::kind::box)) stripped.push_back(g.operand());
            formula_set ctx(std::move(stripped));
            sequent premise{ctx, {f.operand()}};
            if (auto sub = prove(premise, depth - (goal == sequent{boxed_ctx(ctx), {f}} ? 1 : 2))) {
                derivation k_node{{boxed_ctx(ctx), {f}}, {rule::k, {}}, {std::move(*sub)}};
                return weaken_to(std::move(k_node), goal);
            }
        }

        // Right negation through one weakening: the premise flips one
        // negated goal formula against the negated left formulas.
        for (const formula& f : right) {
            if (!f.is(formula::kind::neg)) continue;
            std::vector<formula> stripped;
            for (const formula& g : left)
                if (g.is(formula::kind::neg)) stripped.push_back(g.operand());
            formula_set ctx(std::move(stripped));
            sequent negr{negated_ctx(ctx), {f}};
            sequent premise{{f.operand()}, ctx};
            if (auto sub = prove(premise, depth - (goal == negr ? 1 : 2))) {
                derivation n_node{negr, {rule::neg_r, {}}, {std::move(*sub)}};
                return weaken_to(std::move(n_node), goal);
            }
        }

        // Cut, last.
        if (opts_.cuts != cut_policy::none) {
            std::vector<formula> pool =
                opts_.cuts == cut_policy::analytic ? root_pool_ : cut_pool(goal);
            for (const formula& c : pool) {
                if (left.contains(c) || right.contains(c)) continue;
                if (auto d = attach(goal, {rule::cut, {c}},
                                    {{left, right.with(c)}, {left.with(c), right}}, depth))
                    return d;
            }
        }
        return std::nullopt;
    }

    static formula_set boxed_ctx(const formula_set& fs) {
        std::vector<formula> out;
        for (const formula& f : fs) out.push_back(formula::box(f));
        return formula_set(std::move(out));
    }

    static formula_set negated_ctx(const formula_set& fs) {
        std::vector<formula> out;
        for (const formula& f : fs) out.push_back(formula::neg(f));
        return formula_set(std::move(out));
    }

    proof_search_options opts_;
    std::vector<formula> root_pool_;
    std::map<sequent, derivation> proved_;
    std::map<sequent, int> failed_;
    std::uint64_t nodes_ = 0;
};

}  // namespace

std::optional<derivation> search_proof(const sequent& goal,
                                       const proof_search_options& opts) {
    if (opts.depth_limit < 1) throw error("proof search needs a depth limit of at least 1");
    auto found = prover(goal, opts).run(goal);
    // The generators only propose premises that check_rule accepted, so a
    // failure here is a bug; refuse to hand out an unchecked tree.
    if (found && !check_derivation(*found).ok)
        throw error("proof search produced a derivation that fails its own checker");
    return found;
}

}  // namespace qml
