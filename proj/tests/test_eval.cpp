#include <doctest.h>

#include "qml/eval.hpp"
#include "qml/search.hpp"

using namespace qml;

namespace {

relation chain3() {
    relation r = relation::identity(3);
    r.link(0, 1);
    r.link(1, 2);
    return r;
}

}  // namespace

TEST_CASE("vacuous box and discrete negation") {
    structure s(relation::identity(2), relation(2),
                {{"p", world_set(2)}});
    for (int i = 0; i < 2; ++i) {
        CHECK(holds(s, i, parse("[]p")));
        CHECK(holds(s, i, parse("~p")));  // only rq-neighbour is i itself
        CHECK_FALSE(holds(s, i, parse("p")));
    }
}

TEST_CASE("negation scans rq neighbours") {
    // Chain w0-w1-w2, rm = identity, p at w0 only.
    structure s(chain3(), relation::identity(3),
                {{"p", world_set::from_bits(3, 0b001)}});
    CHECK_FALSE(holds(s, 1, parse("~p")));  // neighbour w0 satisfies p
    CHECK(holds(s, 2, parse("~p")));
    CHECK(truth_set(s, parse("~~p")) == world_set::from_bits(3, 0b001));
}

TEST_CASE("truth set clauses") {
    structure s(chain3(), relation::identity(3),
                {{"p", world_set::from_bits(3, 0b001)},
                 {"q", world_set::from_bits(3, 0b100)}});
    CHECK(truth_set(s, parse("p & q")) ==
          truth_set(s, parse("p")).intersected(truth_set(s, parse("q"))));
    CHECK(truth_set(s, parse("~p")) == ortho(s, truth_set(s, parse("p"))));
    CHECK(truth_set(s, parse("~q")) == ortho(s, truth_set(s, parse("q"))));
}

TEST_CASE("evaluation guards") {
    structure s(relation::identity(1), relation(1), {{"p", world_set::full(1)}});
    CHECK_THROWS_AS(holds(s, 1, parse("p")), error);
    CHECK_THROWS_AS(holds(s, -1, parse("p")), error);
    CHECK_THROWS_AS(holds(s, 0, parse("z")), error);
    CHECK_THROWS_AS(truth_set(s, parse("p & z")), error);
    CHECK_THROWS_AS(truth_set_naive(s, parse("z")), error);
}

TEST_CASE("entailment inside one structure") {
    structure s(relation::identity(1), relation(1),
                {{"p", world_set::full(1)}, {"q", world_set(1)}});
    CHECK(entails_in(s, {{parse("p")}, {parse("p")}}));
    CHECK_FALSE(entails_in(s, {{parse("p")}, {parse("q")}}));
    CHECK(gamma_worlds(s, {}) == world_set::full(1));

    // Empty delta: true iff no world satisfies gamma.
    CHECK(entails_in(s, {{parse("q")}, {}}));
    CHECK_FALSE(entails_in(s, {{parse("p")}, {}}));
    CHECK(entails_in(s, {{parse("p"), parse("~p")}, {}}));
}

TEST_CASE("example-1 unfolding of ~[]p matches the clauses") {
    // holds(i, ~[]p) iff every rq-neighbour j of i has an rm-successor
    // outside p.  Checked over every structure with up to 3 worlds.
    formula nbp = parse("~[]p");
    formula p = parse("p");
    for_each_structure(search_budget::exhaustive(3, {"p"}),
                       [&](const structure& s, const canonical_key&) {
                           int n = s.world_count();
                           for (int i = 0; i < n; ++i) {
                               bool unfolded = true;
                               for (int j = 0; j < n && unfolded; ++j) {
                                   if (!s.rq().at(i, j)) continue;
                                   bool some_k = false;
                                   for (int k = 0; k < n && !some_k; ++k)
                                       if (s.rm().at(j, k) && !holds(s, k, p))
                                           some_k = true;
                                   unfolded = some_k;
                               }
                               CHECK(holds(s, i, nbp) == unfolded);
                           }
                           return true;
                       });
}

TEST_CASE("memoized truth sets agree with per-world recursion") {
    formula_table universe({"p", "q"});
    universe.add_universe(2);
    for_each_structure(search_budget::exhaustive(2, {"p", "q"}),
                       [&](const structure& s, const canonical_key&) {
                           for (int id = 0; id < universe.size(); ++id) {
                               formula f = universe.formula_of(id);
                               CHECK(truth_set(s, f) == truth_set_naive(s, f));
                           }
                           return true;
                       });
}

TEST_CASE("formula table interning") {
    formula_table table({"q", "p", "p"});  // deduplicated and sorted
    CHECK(table.atoms() == std::vector<std::string>{"p", "q"});

    int a = table.intern(parse("p & q"));
    int b = table.intern(parse("p & q"));
    CHECK(a == b);
    CHECK(table.id_of(parse("p")) != -1);   // subformulas interned too
    CHECK(table.id_of(parse("~p")) == -1);
    CHECK(table.formula_of(a) == parse("p & q"));
    CHECK_FALSE(table.modal(a));

    int m = table.intern(parse("~[]p"));
    CHECK(table.modal(m));
    CHECK(table.modal(table.id_of(parse("[]p"))));

    CHECK_THROWS_AS(table.intern(parse("z")), error);
    CHECK_THROWS_AS(table.formula_of(99), error);
}

TEST_CASE("universe growth by depth") {
    formula_table d1({"p"});
    d1.add_universe(1);
    // depth <= 1 over one atom: p, ~p, []p, p & p.
    CHECK(d1.size() == 4);

    formula_table d2({"p", "q"});
    d2.add_universe(2);
    CHECK(d2.size() == 122);
    for (int id = 0; id < d2.size(); ++id) CHECK(d2.formula_of(id).depth() <= 2);
}

TEST_CASE("staged evaluation equals one-shot evaluation") {
    formula_table table({"p", "q"});
    table.add_universe(2);
    for_each_structure(
        search_budget::exhaustive(2, {"p", "q"}),
        [&](const structure& s, const canonical_key&) {
            frame_data fd = make_frame_data(s, table);
            std::vector<std::uint64_t> whole(table.size()), staged(table.size());
            table.evaluate(fd.view(), whole.data());
            table.evaluate_plain(fd.view(), staged.data());
            table.evaluate_modal(fd.view(), staged.data());
            CHECK(whole == staged);
            for (int id = 0; id < table.size(); ++id)
                CHECK(whole[id] == truth_set_naive(s, table.formula_of(id)).bits());
            return true;
        });
}

TEST_CASE("frame data resolves atoms by table slot") {
    structure s(relation::identity(2), relation(2),
                {{"p", world_set::from_bits(2, 0b01)},
                 {"q", world_set::from_bits(2, 0b10)}});
    formula_table table({"q", "p"});
    frame_data fd = make_frame_data(s, table);
    CHECK(fd.atom_bits == std::vector<std::uint64_t>{0b01, 0b10});  // p first after sorting

    formula_table wider({"p", "q", "r"});
    CHECK_THROWS_AS(make_frame_data(s, wider), error);
}
