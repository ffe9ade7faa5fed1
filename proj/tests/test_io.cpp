#include <doctest.h>

#include <json.hpp>

#include "qml/corpus.hpp"
#include "qml/model_json.hpp"
#include "qml/proof_json.hpp"

using namespace qml;
using nlohmann::json;

TEST_CASE("model files round trip") {
    relation rq = relation::identity(3);
    rq.link(0, 1);
    relation rm(3);
    rm.set(0, 2);
    rm.set(1, 2);
    structure s(rq, rm,
                {{"p", world_set::from_bits(3, 0b100)}, {"q", world_set(3)}},
                {"a", "b", "c"});
    json j = structure_to_json(s);
    CHECK(structure_from_json(j) == s);

    structure defaults(relation::identity(2), relation(2),
                       {{"p", world_set::from_bits(2, 0b01)}});
    CHECK(structure_from_json(structure_to_json(defaults)) == defaults);
}

TEST_CASE("golden one-world model text") {
    structure s(relation::identity(1), relation(1), {{"p", world_set::full(1)}});
    CHECK(structure_to_json(s).dump() ==
          R"({"rm":[],"rq":[[0,0]],"valuation":{"p":[0]},"worlds":["w0"]})");
}

TEST_CASE("reflexive rq pairs may be omitted in files") {
    json j = {{"worlds", {"w0", "w1"}},
              {"rq", json::array({json::array({0, 1}), json::array({1, 0})})},
              {"rm", json::array()},
              {"valuation", json::object()}};
    structure s = structure_from_json(j);
    CHECK(s.rq().at(0, 0));
    CHECK(s.rq().at(1, 1));
    CHECK(s.rq().at(0, 1));
    CHECK(s.validate().empty());

    // Symmetry is not silently completed; validate reports it.
    json one_way = {{"worlds", {"w0", "w1"}},
                    {"rq", json::array({json::array({0, 1})})},
                    {"rm", json::array()},
                    {"valuation", json::object()}};
    structure t = structure_from_json(one_way);
    CHECK_FALSE(t.validate().empty());
}

TEST_CASE("model file errors are positioned") {
    auto load = [](const char* text) { return structure_from_json(json::parse(text)); };

    CHECK_THROWS_WITH_AS(load(R"({"worlds":[]})"), doctest::Contains("worlds"), error);
    CHECK_THROWS_WITH_AS(load(R"({"worlds":["a","a"]})"), doctest::Contains("duplicate"),
                         error);
    CHECK_THROWS_WITH_AS(load(R"({"worlds":["a"],"rq":[[0,3]]})"),
                         doctest::Contains("rq"), error);
    CHECK_THROWS_WITH_AS(load(R"({"worlds":["a"],"valuation":{"p":[2]}})"),
                         doctest::Contains("valuation"), error);
    CHECK_THROWS_WITH_AS(load(R"({"worlds":["a"],"surprise":1})"),
                         doctest::Contains("surprise"), error);
    CHECK_THROWS_WITH_AS(load(R"({"worlds":["a"],"rq":[[0]]})"), doctest::Contains("pair"),
                         error);
    CHECK_THROWS_WITH_AS(load(R"([1,2,3])"), doctest::Contains("object"), error);
}

TEST_CASE("proof files round trip the whole corpus") {
    for (const corpus_entry& e : builtin_corpus()) {
        CAPTURE(e.name);
        json j = derivation_to_json(e.proof);
        CHECK(derivation_from_json(j) == e.proof);
    }
}

TEST_CASE("proof wire format shapes") {
    json leaf = derivation_to_json(ax(parse("p")));
    CHECK(leaf["rule"]["name"] == "AX");
    CHECK_FALSE(leaf["rule"].contains("formula"));
    CHECK_FALSE(leaf.contains("premises"));
    CHECK(leaf["conclusion"]["left"] == json::array({"p"}));

    json m = derivation_to_json(mem({}, parse("p")));
    CHECK(m["rule"]["name"] == "MEM");
    CHECK(m["rule"]["formula"] == "p");

    derivation andl{parse_sequent("p & q |- p"),
                    {rule::conj_l1, {parse("p"), parse("q")}},
                    {ax(parse("p"))}};
    json a = derivation_to_json(andl);
    CHECK(a["rule"]["formulas"] == json::array({"p", "q"}));
    CHECK(a["premises"].size() == 1);
}

TEST_CASE("proof file errors name the offending node") {
    auto load = [](json j) { return derivation_from_json(j); };

    json missing_rule = {{"conclusion", {{"left", json::array()}, {"right", {"p"}}}}};
    CHECK_THROWS_WITH_AS(load(missing_rule), doctest::Contains("rule"), error);

    json bad_name = derivation_to_json(ax(parse("p")));
    bad_name["rule"]["name"] = "FROBNICATE";
    CHECK_THROWS_WITH_AS(load(bad_name), doctest::Contains("FROBNICATE"), error);

    json extra_param = derivation_to_json(ax(parse("p")));
    extra_param["rule"]["formula"] = "p";
    CHECK_THROWS_AS(load(extra_param), error);

    json nested = derivation_to_json(derivation{
        parse_sequent("p, r |- p"), {rule::wkn, {}}, {ax(parse("p"))}});
    nested["premises"][0]["rule"]["name"] = "NOPE";
    CHECK_THROWS_WITH_AS(load(nested), doctest::Contains("premises[0]"), error);

    json bad_formula = derivation_to_json(ax(parse("p")));
    bad_formula["conclusion"]["left"][0] = "p & & q";
    CHECK_THROWS_AS(load(bad_formula), error);
}
