#include "qml/corpus.hpp"

namespace qml {

namespace {

// Forward builders: each applies one rule to finished subtrees and
// computes the conclusion the checker will expect, so the corpus cannot
// drift from the schemas.

derivation wkn(derivation p, const formula_set& add_left, const formula_set& add_right) {
    sequent c{p.conclusion.left.united(add_left), p.conclusion.right.united(add_right)};
    return {std::move(c), {rule::wkn, {}}, {std::move(p)}};
}

derivation cut(derivation p1, derivation p2, const formula& a) {
    sequent c{p1.conclusion.left.united(p2.conclusion.left.without(a)),
              p1.conclusion.right.without(a).united(p2.conclusion.right)};
    return {std::move(c), {rule::cut, {a}}, {std::move(p1), std::move(p2)}};
}

derivation conj_l1(derivation p, const formula& a, const formula& b) {
    sequent c{p.conclusion.left.without(a).with(formula::conj(a, b)), p.conclusion.right};
    return {std::move(c), {rule::conj_l1, {a, b}}, {std::move(p)}};
}

derivation conj_l2(derivation p, const formula& a, const formula& b) {
    sequent c{p.conclusion.left.without(b).with(formula::conj(a, b)), p.conclusion.right};
    return {std::move(c), {rule::conj_l2, {a, b}}, {std::move(p)}};
}

derivation conj_r(derivation p1, derivation p2, const formula& a, const formula& b) {
    sequent c{p1.conclusion.left,
              p1.conclusion.right.without(a).with(formula::conj(a, b))};
    return {std::move(c), {rule::conj_r, {}}, {std::move(p1), std::move(p2)}};
}

derivation neg_l(derivation p, const formula& a) {
    sequent c{p.conclusion.left.with(formula::neg(a)), p.conclusion.right.without(a)};
    return {std::move(c), {rule::neg_l, {a}}, {std::move(p)}};
}

derivation neg_r(derivation p) {
    formula a = p.conclusion.left[0];
    std::vector<formula> negated;
    for (const formula& d : p.conclusion.right) negated.push_back(formula::neg(d));
    sequent c{formula_set(std::move(negated)), {formula::neg(a)}};
    return {std::move(c), {rule::neg_r, {}}, {std::move(p)}};
}

derivation negneg_l(derivation p, const formula& a) {
    sequent c{p.conclusion.left.without(a).with(formula::neg(formula::neg(a))),
              p.conclusion.right};
    return {std::move(c), {rule::negneg_l, {a}}, {std::move(p)}};
}

derivation negneg_r(derivation p, const formula& a) {
    sequent c{p.conclusion.left,
              p.conclusion.right.without(a).with(formula::neg(formula::neg(a)))};
    return {std::move(c), {rule::negneg_r, {a}}, {std::move(p)}};
}

derivation k(derivation p) {
    std::vector<formula> boxed;
    for (const formula& g : p.conclusion.left) boxed.push_back(formula::box(g));
    sequent c{formula_set(std::move(boxed)), {formula::box(p.conclusion.right[0])}};
    return {std::move(c), {rule::k, {}}, {std::move(p)}};
}

std::vector<corpus_entry> build() {
    formula p = formula::atom("p");
    formula q = formula::atom("q");
    formula np = formula::neg(p);
    formula pq = formula::conj(p, q);
    formula pnp = formula::conj(p, np);
    formula bp = formula::box(p);
    formula bq = formula::box(q);

    std::vector<corpus_entry> out;
    auto add = [&](std::string name, derivation d) {
        out.push_back({std::move(name), std::move(d)});
    };

    add("identity", ax(p));
    add("identity-compound", ax(pq));
    add("weaken-left", wkn(ax(p), {q}, {}));
    add("weaken-right", wkn(ax(p), {}, {q}));
    add("conjunction-left-first", conj_l1(ax(p), p, q));
    add("conjunction-left-second", conj_l2(ax(q), p, q));
    add("conjunction-right",
        conj_r(wkn(ax(p), {q}, {}), wkn(ax(q), {p}, {}), p, q));
    add("conjunction-idempotent", conj_r(ax(p), ax(p), p, p));
    add("conjunction-commutes",
        conj_r(conj_l2(ax(q), p, q), conj_l1(ax(p), p, q), q, p));
    add("contradiction-unsatisfiable", neg_l(ax(p), p));
    add("explosion", explosion(wkn(ax(p), {np}, {}), wkn(ax(np), {p}, {}), q));
    add("cut-composition",
        cut(conj_l1(ax(p), p, q), conj_r(ax(p), ax(p), p, p), p));
    add("double-negation-left", negneg_l(ax(p), p));
    add("double-negation-right", negneg_r(ax(p), p));
    add("negation-identity", neg_r(ax(p)));
    add("negation-contrapositive", neg_r(conj_l1(ax(p), p, q)));
    add("non-contradiction",
        neg_r(conj_l2(conj_l1(neg_l(ax(p), p), p, np), p, np)));
    add("membership-inconsistent-context", mem({pnp}, q));
    add("membership-conjoined",
        conj_r(explosion(conj_l1(ax(p), p, np), conj_l2(ax(np), p, np), bq),
               explosion(conj_l1(ax(p), p, np), conj_l2(ax(np), p, np),
                         formula::neg(bq)),
               bq, formula::neg(bq)));
    add("box-identity-via-membership",
        cut(mem({}, p), neg_l(ax(bp), bp), formula::neg(bp)));
    add("box-monotone-first", k(conj_l1(ax(p), p, q)));
    add("box-monotone-second", k(conj_l2(ax(q), p, q)));
    add("box-splits-out",
        conj_r(k(conj_l1(ax(p), p, q)), k(conj_l2(ax(q), p, q)), bp, bq));
    add("box-distributes-in",
        k(conj_r(wkn(ax(p), {q}, {}), wkn(ax(q), {p}, {}), p, q)));
    add("box-factors",
        conj_l2(conj_l1(k(conj_r(wkn(ax(p), {q}, {}), wkn(ax(q), {p}, {}), p, q)),
                        bp, bq),
                bp, bq));
    return out;
}

}  // namespace

const std::vector<corpus_entry>& builtin_corpus() {
    static const std::vector<corpus_entry> corpus = build();
    return corpus;
}

const corpus_entry* find_corpus_entry(std::string_view name) {
    for (const corpus_entry& e : builtin_corpus())
        if (e.name == name) return &e;
    return nullptr;
}

}  // namespace qml
