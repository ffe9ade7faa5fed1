#include <doctest.h>

#include <algorithm>

#include "qml/enumeration.hpp"
#include "qml/frame.hpp"

using namespace qml;

namespace {

// rq chain w0 - w1 - w2 (reflexive, symmetric, no 0-2 edge).
relation chain3() {
    relation r = relation::identity(3);
    r.link(0, 1);
    r.link(1, 2);
    return r;
}

// Empty rm: the chain has one rq-component, so any non-trivial forced rm
// column would have to be all of W.
structure chain3_structure(std::uint64_t p_bits) {
    return structure(chain3(), relation(3),
                     {{"p", world_set::from_bits(3, p_bits)}});
}

}  // namespace

TEST_CASE("world set algebra") {
    world_set a = world_set::from_bits(4, 0b0101);
    world_set b = world_set::from_bits(4, 0b0011);
    CHECK(a.size() == 2);
    CHECK(a.contains(0));
    CHECK_FALSE(a.contains(1));
    CHECK(a.united(b) == world_set::from_bits(4, 0b0111));
    CHECK(a.intersected(b) == world_set::from_bits(4, 0b0001));
    CHECK(a.minus(b) == world_set::from_bits(4, 0b0100));
    CHECK(a.complemented() == world_set::from_bits(4, 0b1010));
    CHECK(a.subset_of(world_set::full(4)));
    CHECK_FALSE(world_set::full(4).subset_of(a));
    CHECK(a.members() == std::vector<int>{0, 2});
    CHECK(world_set(4).none());

    world_set other(3);
    CHECK_THROWS_AS((void)a.united(other), error);
    CHECK_THROWS_AS(world_set::single(2, 5), error);
}

TEST_CASE("relation basics and law checks") {
    relation id = relation::identity(3);
    CHECK(id.reflexive());
    CHECK(id.symmetric());
    CHECK(id.transitive());

    relation total = relation::total(3);
    CHECK(total.reflexive());
    CHECK(total.symmetric());
    CHECK(total.transitive());

    relation c = chain3();
    CHECK(c.reflexive());
    CHECK(c.symmetric());
    CHECK_FALSE(c.transitive());  // 0-1 and 1-2 without 0-2
    CHECK(c.at(0, 1));
    CHECK_FALSE(c.at(0, 2));
    CHECK(c.row(1) == world_set::full(3));
    CHECK(c.column(0) == world_set::from_bits(3, 0b011));

    relation one_way = relation::from_pairs(2, {{0, 0}, {1, 1}, {0, 1}});
    CHECK(one_way.reflexive());
    CHECK_FALSE(one_way.symmetric());

    CHECK_THROWS_AS(relation::from_pairs(2, {{0, 2}}), error);
}

TEST_CASE("ortho on the three-world chain") {
    structure s = chain3_structure(0b001);  // p at w0
    CHECK(ortho(s, world_set::from_bits(3, 0)) == world_set::full(3));
    CHECK(ortho(s, world_set::full(3)) == world_set(3));
    CHECK(ortho(s, world_set::from_bits(3, 0b001)) == world_set::from_bits(3, 0b100));
    CHECK(ortho(s, world_set::from_bits(3, 0b010)) == world_set(3));

    CHECK(biortho(s, world_set::from_bits(3, 0b001)) == world_set::from_bits(3, 0b001));
    CHECK(biortho(s, world_set::from_bits(3, 0b010)) == world_set::full(3));
    CHECK(is_closed(s, world_set::from_bits(3, 0b001)));
    CHECK_FALSE(is_closed(s, world_set::from_bits(3, 0b010)));
    CHECK(is_closed(s, world_set(3)));
    CHECK(is_closed(s, world_set::full(3)));
}

TEST_CASE("ortho under total rq") {
    structure s(relation::total(2), relation(2), {});
    CHECK(ortho(s, world_set::from_bits(2, 0b01)) == world_set(2));
    CHECK(closed_sets(s) ==
          std::vector<world_set>{world_set(2), world_set::full(2)});
}

TEST_CASE("closed set enumeration") {
    structure chain = chain3_structure(0);
    CHECK(closed_sets(chain) ==
          std::vector<world_set>{world_set(3), world_set::from_bits(3, 0b001),
                                 world_set::from_bits(3, 0b100), world_set::full(3)});

    structure discrete(relation::identity(3), relation(3), {});
    CHECK(closed_sets(discrete).size() == 8);  // ortho is complement, all subsets closed

    structure total3(relation::total(3), relation(3), {});
    CHECK(closed_sets(total3) ==
          std::vector<world_set>{world_set(3), world_set::full(3)});
}

TEST_CASE("closed sets are closed under intersection") {
    for (std::uint64_t mask = 0; mask < 8; ++mask) {
        structure s(relation::from_rows(3, rq_rows_from_mask(3, mask)), relation(3), {});
        std::vector<world_set> cs = closed_sets(s);
        for (const world_set& x : cs)
            for (const world_set& y : cs) {
                world_set both = x.intersected(y);
                CHECK(std::find(cs.begin(), cs.end(), both) != cs.end());
            }
    }
}

TEST_CASE("closedness via biortho matches the definitional biconditional") {
    // X closed iff every world satisfies: i in X <=> every rq-neighbour j
    // of i has some rq-neighbour k inside X.  Checked literally on all
    // subsets of all rq choices at n <= 4.
    for (int n = 1; n <= 4; ++n) {
        std::uint64_t mask_count = 1ull << world_pair_count(n);
        for (std::uint64_t mask = 0; mask < mask_count; ++mask) {
            structure s(relation::from_rows(n, rq_rows_from_mask(n, mask)), relation(n), {});
            for (std::uint64_t bits = 0; bits < (1ull << n); ++bits) {
                world_set x = world_set::from_bits(n, bits);
                bool definitional = true;
                for (int i = 0; i < n && definitional; ++i) {
                    bool rhs = true;
                    for (int j = 0; j < n && rhs; ++j) {
                        if (!s.rq().at(i, j)) continue;
                        bool some_k = false;
                        for (int k = 0; k < n && !some_k; ++k)
                            if (s.rq().at(j, k) && x.contains(k)) some_k = true;
                        rhs = some_k;
                    }
                    if (x.contains(i) != rhs) definitional = false;
                }
                CHECK(is_closed(s, x) == definitional);
            }
        }
    }
}

TEST_CASE("validate reports each law separately") {
    structure ok(relation::identity(1), relation(1), {{"p", world_set::full(1)}});
    CHECK(ok.validate().empty());

    structure asym(relation::from_pairs(2, {{0, 0}, {1, 1}, {0, 1}}), relation(2), {});
    auto vs = asym.validate();
    REQUIRE(vs.size() == 1);
    CHECK(vs[0].what == violation::code::not_symmetric);
    CHECK(vs[0].i == 0);
    CHECK(vs[0].j == 1);

    structure bald(relation::from_pairs(2, {{1, 1}, {0, 1}, {1, 0}}), relation(2), {});
    CHECK(bald.validate().front().what == violation::code::not_reflexive);

    // rq links 0-1 but only world 0 reaches l=0 through rm.
    relation rm(2);
    rm.set(0, 0);
    relation rq = relation::identity(2);
    rq.link(0, 1);
    structure forcing_broken(rq, rm, {});
    auto fv = forcing_broken.validate();
    REQUIRE(fv.size() == 1);
    CHECK(fv[0].what == violation::code::forcing);
    CHECK(fv[0].i == 0);
    CHECK(fv[0].j == 1);
    CHECK(fv[0].l == 0);

    structure open_val = chain3_structure(0b010);  // {w1} is not closed
    auto vv = open_val.validate();
    REQUIRE(vv.size() == 1);
    CHECK(vv[0].what == violation::code::valuation_not_closed);
    CHECK(vv[0].atom == "p");
    CHECK_FALSE(vv[0].message().empty());
}

TEST_CASE("structure construction guards") {
    CHECK_THROWS_AS(structure(relation(0), relation(0), {}), error);
    CHECK_THROWS_AS(structure(relation(2), relation(3), {}), error);
    CHECK_THROWS_AS(structure(relation(1), relation(1), {{"p", world_set(2)}}), error);
    CHECK_THROWS_AS(structure(relation(2), relation(2), {}, {"a", "a"}), error);
    CHECK_THROWS_AS(structure(relation(1), relation(1), {}, {"a", "b"}), error);

    structure named(relation::identity(2), relation(2), {}, {"here", "there"});
    CHECK(named.world_name(1) == "there");
    CHECK(named.world_index("here") == 0);
    CHECK(named.world_index("nowhere") == -1);

    structure defaults(relation::identity(2), relation(2), {});
    CHECK(defaults.world_name(0) == "w0");
    CHECK(defaults.world_name(1) == "w1");
}

TEST_CASE("rq components") {
    structure chain = chain3_structure(0);
    component_partition one = rq_components(chain);
    CHECK(one.count == 1);
    CHECK(one.masks == std::vector<std::uint64_t>{0b111});

    structure discrete(relation::identity(3), relation(3), {});
    component_partition three = rq_components(discrete);
    CHECK(three.count == 3);
    CHECK(three.component_of == std::vector<int>{0, 1, 2});

    relation rq = relation::identity(3);
    rq.link(0, 1);
    structure pair_plus_singleton(rq, relation(3), {});
    component_partition two = rq_components(pair_plus_singleton);
    CHECK(two.count == 2);
    CHECK(two.masks == std::vector<std::uint64_t>{0b011, 0b100});

    structure asym(relation::from_pairs(2, {{0, 0}, {1, 1}, {0, 1}}), relation(2), {});
    CHECK_THROWS_AS(rq_components(asym), error);
}

TEST_CASE("forcing by components agrees with the direct check") {
    relation rq = relation::identity(3);
    rq.link(0, 1);

    relation rm_bad(3);
    rm_bad.set(0, 0);  // column 0 = {0} splits the {0,1} component
    structure bad(rq, rm_bad, {});
    CHECK_FALSE(forcing_by_components(bad));
    CHECK_FALSE(bad.validate().empty());

    relation rm_good(3);
    rm_good.set(0, 0);
    rm_good.set(1, 0);
    structure good(rq, rm_good, {});
    CHECK(forcing_by_components(good));
    CHECK(good.validate().empty());
}

TEST_CASE("alethic builder") {
    CHECK(make_alethic(relation::identity(3), {}).validate().empty());
    CHECK(make_alethic(relation::total(3), {}).validate().empty());

    structure chain_alethic = make_alethic(chain3(), {});
    auto vs = chain_alethic.validate();
    REQUIRE_FALSE(vs.empty());
    CHECK(vs[0].what == violation::code::forcing);
    CHECK(chain_alethic.rm() == chain_alethic.rq());

    structure asym = make_alethic(relation::from_pairs(2, {{0, 0}, {1, 1}, {0, 1}}), {});
    CHECK(asym.validate().front().what == violation::code::not_symmetric);
}

TEST_CASE("subset guard on closed set enumeration") {
    structure big(relation::identity(21), relation(21), {});
    CHECK_THROWS_AS(closed_sets(big), error);
}
