#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "qml/search.hpp"

using namespace qml;

TEST_CASE("the canonical stream yields exactly the valid structures") {
    // Against the generate-and-filter oracle, as sets, at toy sizes.
    for (auto atoms : {std::vector<std::string>{"p"}, std::vector<std::string>{"p", "q"}}) {
        CAPTURE(atoms.size());
        std::vector<structure> expected = qml::testing::naive_structures_upto(2, atoms);
        std::vector<structure> got;
        canonical_key last{0, 0, 0, 0};
        for_each_structure(search_budget::exhaustive(2, atoms),
                           [&](const structure& s, const canonical_key& key) {
                               CHECK(last < key);  // strictly ascending, no repeats
                               last = key;
                               CHECK(s.validate().empty());
                               got.push_back(s);
                               return true;
                           });
        CHECK(got.size() == expected.size());
        for (const structure& s : expected)
            CHECK(std::find(got.begin(), got.end(), s) != got.end());
    }
}

TEST_CASE("one-world stream is the four known structures") {
    std::vector<canonical_key> keys;
    std::vector<structure> models;
    for_each_structure(search_budget::exhaustive(1, {"p"}),
                       [&](const structure& s, const canonical_key& key) {
                           keys.push_back(key);
                           models.push_back(s);
                           return true;
                       });
    CHECK(keys == std::vector<canonical_key>{
                      {1, 0, 0, 0}, {1, 0, 0, 1}, {1, 0, 1, 0}, {1, 0, 1, 1}});
    CHECK(models[0].rm().at(0, 0) == false);
    CHECK(models[2].rm().at(0, 0) == true);
    CHECK(models[0].atom_truth("p")->none());
    CHECK_FALSE(models[1].atom_truth("p")->none());
}

TEST_CASE("closed-form counts match the stream and the oracle") {
    for (int n = 1; n <= 3; ++n) {
        search_budget b = search_budget::exhaustive(n, {"p"});
        std::uint64_t streamed = 0;
        for_each_structure(b, [&](const structure&, const canonical_key&) {
            ++streamed;
            return true;
        });
        CHECK(streamed == count_structures(b));
    }
    CHECK(count_structures(search_budget::exhaustive(1, {"p"})) == 4);
    CHECK(count_structures(search_budget::exhaustive(3, {"p"})) ==
          qml::testing::naive_structures_upto(3, {"p"}).size());
    CHECK(count_structures(search_budget::exhaustive(2, {"p", "q"})) ==
          qml::testing::naive_structures_upto(2, {"p", "q"}).size());
    // Frozen total for the two-atom stream used by the property scans:
    // n=1 gives 8, n=2 gives 272, n=3 gives 32768 + 3*1024 + 3*128 + 32.
    search_budget two_atoms = search_budget::exhaustive(3, {"p", "q"});
    CHECK(count_structures(two_atoms) == 36536);
    std::uint64_t streamed2 = 0;
    for_each_structure(two_atoms, [&](const structure&, const canonical_key&) {
        ++streamed2;
        return true;
    });
    CHECK(streamed2 == 36536);
}

TEST_CASE("stream can stop early") {
    int seen = 0;
    for_each_structure(search_budget::exhaustive(3, {"p"}),
                       [&](const structure&, const canonical_key&) {
                           return ++seen < 5;
                       });
    CHECK(seen == 5);
}

TEST_CASE("budget guards") {
    CHECK_THROWS_AS(search_budget::exhaustive(0, {"p"}), error);
    CHECK_THROWS_AS(search_budget::exhaustive(k_exhaustive_cap + 1, {"p"}), error);
    CHECK_THROWS_AS(search_budget::randomized(k_random_worlds_cap + 1, {"p"}, 1, 10),
                    error);
}

TEST_CASE("random sampling is reproducible and valid") {
    search_budget b = search_budget::randomized(5, {"p", "q"}, 42, 200);
    std::vector<structure> first, second;
    for_each_structure(b, [&](const structure& s, const canonical_key& key) {
        CHECK(s.validate().empty());
        CHECK(key.n == s.world_count());
        CHECK(s.world_count() <= 5);
        first.push_back(s);
        return true;
    });
    for_each_structure(b, [&](const structure& s, const canonical_key&) {
        second.push_back(s);
        return true;
    });
    CHECK(first.size() == 200);
    CHECK(first == second);

    std::vector<structure> reseeded;
    for_each_structure(search_budget::randomized(5, {"p", "q"}, 43, 200),
                       [&](const structure& s, const canonical_key&) {
                           reseeded.push_back(s);
                           return true;
                       });
    CHECK(reseeded != first);
}

TEST_CASE("first countermodel in canonical order") {
    auto cm = find_countermodel({}, parse("p"), search_budget::exhaustive(2, {"p"}));
    REQUIRE(cm.has_value());
    // The very first structure: one world, empty rm, p false.
    CHECK(cm->where == canonical_key{1, 0, 0, 0});
    CHECK(cm->witness_world == 0);
    CHECK_FALSE(holds(cm->model, 0, parse("p")));
}

TEST_CASE("kernel and serial countermodel search agree") {
    struct query {
        formula_set gamma;
        formula alpha;
    };
    std::vector<query> queries = {
        {{parse("p")}, parse("q")},
        {{}, parse("p | ~p")},
        {{parse("[]p")}, parse("p")},
        {{parse("~~p")}, parse("p")},
        {{parse("[](p & q)")}, parse("[]p")},
        {{parse("p"), parse("q")}, parse("p & q")},
        {{parse("[]p")}, parse("[][]p")},
    };
    for (const query& q : queries) {
        CAPTURE(print(q.alpha));
        std::vector<std::string> atoms = atom_names(q.gamma);
        for (const std::string& a : atom_names(q.alpha)) atoms.push_back(a);
        std::sort(atoms.begin(), atoms.end());
        atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
        search_budget b = search_budget::exhaustive(3, atoms);
        auto fast = find_countermodel(q.gamma, q.alpha, b);
        auto slow = find_countermodel_serial(q.gamma, q.alpha, b);
        CHECK(fast.has_value() == slow.has_value());
        if (fast && slow) {
            CHECK(fast->where == slow->where);
            CHECK(fast->witness_world == slow->witness_world);
            CHECK(fast->model == slow->model);
            for (const formula& g : q.gamma) CHECK(holds(fast->model, fast->witness_world, g));
            CHECK_FALSE(holds(fast->model, fast->witness_world, q.alpha));
        }
    }
}

TEST_CASE("semantically valid goals have no countermodel at small sizes") {
    CHECK_FALSE(find_countermodel({parse("p & q")}, parse("p"),
                                  search_budget::exhaustive(3, {"p", "q"}))
                    .has_value());
    CHECK_FALSE(find_countermodel({parse("~~p")}, parse("p"),
                                  search_budget::exhaustive(3, {"p"}))
                    .has_value());
    CHECK_FALSE(find_countermodel({}, parse("p | ~p"),
                                  search_budget::exhaustive(3, {"p"}))
                    .has_value());
}

TEST_CASE("refuting a whole sequent") {
    // p |- q: every right formula refutable.
    auto r = refute_entailment({{parse("p")}, {parse("q")}},
                               search_budget::exhaustive(2, {"p", "q"}));
    REQUIRE(r.has_value());
    REQUIRE(r->per_formula.size() == 1);
    CHECK(r->per_formula[0].first == parse("q"));
    CHECK_FALSE(r->gamma_witness.has_value());

    // p |- q, p: p stands, so no refutation; the survivor is reported.
    formula survivor = parse("q");
    auto none = refute_entailment({{parse("p")}, {parse("q"), parse("p")}},
                                  search_budget::exhaustive(2, {"p", "q"}), &survivor);
    CHECK_FALSE(none.has_value());
    CHECK(survivor == parse("p"));

    // Empty delta: refuted iff gamma is satisfiable somewhere.
    auto sat = refute_entailment({{parse("p")}, {}}, search_budget::exhaustive(2, {"p"}));
    REQUIRE(sat.has_value());
    REQUIRE(sat->gamma_witness.has_value());
    CHECK(holds(sat->gamma_witness->model, sat->gamma_witness->witness_world, parse("p")));
    CHECK(sat->per_formula.empty());

    auto unsat = refute_entailment({{parse("p"), parse("~p")}, {}},
                                   search_budget::exhaustive(3, {"p"}));
    CHECK_FALSE(unsat.has_value());
}

TEST_CASE("every witness satisfies gamma and dodges its formula") {
    auto r = refute_entailment({{parse("p")}, {parse("q"), parse("[]p")}},
                               search_budget::exhaustive(3, {"p", "q"}));
    REQUIRE(r.has_value());
    CHECK(r->per_formula.size() == 2);
    for (const auto& [alpha, cm] : r->per_formula) {
        CHECK(holds(cm.model, cm.witness_world, parse("p")));
        CHECK_FALSE(holds(cm.model, cm.witness_world, alpha));
        CHECK(cm.model.validate().empty());
    }
}
