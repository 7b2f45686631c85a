#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cylspace/structure.hpp"

using namespace cyl;

TEST_CASE("structure files") {
    auto A = parse_structure("domain 2\nrelation E 2\n0 1\n1 1\nend\n", "G1");
    CHECK(A.domain_size == 2);
    CHECK(A.table("E") == std::set<Tuple>{{0, 1}, {1, 1}});
    CHECK(pinned_isomorphism(A, g1(), {{0, 0}, {1, 1}}).has_value());

    auto one = parse_structure("domain 1\nend\n");
    CHECK(one.domain_size == 1);
    CHECK(one.sig.relations.empty());

    CHECK_THROWS_AS(parse_structure("domain 2\nrelation E 2\n0 3\nend\n"), error);
    CHECK_THROWS_AS(parse_structure("domain 2\nrelation E 2\n0 1\n"), parse_error);

    auto again = parse_structure(format_structure(A), "G1");
    CHECK(again.table("E") == A.table("E"));
}

TEST_CASE("evaluation on G1") {
    auto A = g1();
    CHECK(evaluate(A, parse_formula("E(v0,v1)", A.sig), {0, 1, 0}));
    auto loop = parse_formula("exists v2 E(v2,v2)", A.sig);
    for (Assignment a : {Assignment{0, 0, 0}, Assignment{1, 0, 1}, Assignment{0, 1, 1}}) CHECK(evaluate(A, loop, a));
    CHECK_FALSE(evaluate(A, parse_formula("v0 = v1", A.sig), {0, 1, 1}));
    CHECK_THROWS_AS(evaluate(A, parse_formula("E(v0,v3)", A.sig), {0, 1, 1}), error);
}

TEST_CASE("automorphism groups") {
    CHECK(automorphisms(g1()).size() == 1);
    CHECK(automorphisms(pure_set(2)).size() == 2);
    CHECK(automorphisms(pure_set(3)).size() == 6);
    CHECK(automorphisms(pure_set(1)).size() == 1);
    for (int mask = 0; mask < 16; ++mask) {
        auto A = digraph(mask);
        bool swap_ok = is_automorphism(A, {1, 0});
        CHECK(automorphisms(A).size() == (swap_ok ? 2u : 1u));
    }
}

TEST_CASE("pinned isomorphism") {
    auto sigma = pinned_isomorphism(g1(), g2());
    REQUIRE(sigma);
    CHECK(*sigma == Perm{1, 0});
    CHECK_FALSE(pinned_isomorphism(g1(), g1(), {{0, 1}}));
    CHECK(pinned_isomorphism(g1(), g1(), {{0, 0}, {1, 1}}) == Perm{0, 1});
    CHECK_FALSE(pinned_isomorphism(g1(), digraph(0)));
    CHECK_FALSE(pinned_isomorphism(pure_set(2), pure_set(3)));
    CHECK_FALSE(pins_from_tuples({0, 0}, {0, 1}));
    CHECK_FALSE(pins_from_tuples({0, 1}, {1, 1}));
}

TEST_CASE("same-type oracle") {
    auto P = pure_set(2);
    CHECK(same_type_oracle(P, {0}, {1}, {}));
    CHECK_FALSE(same_type_oracle(P, {0}, {1}, {0}));
    CHECK(same_type_oracle(g1(), {0, 1}, {0, 1}, {1}));
    CHECK_FALSE(same_type_oracle(g1(), {0}, {1}, {}));
}

TEST_CASE("the digraph catalog has one member per isomorphism class") {
    auto cat = digraph_catalog();
    CHECK(cat.size() == 10);
    for (size_t a = 0; a < cat.size(); ++a)
        for (size_t b = a + 1; b < cat.size(); ++b) CHECK_FALSE(pinned_isomorphism(cat[a], cat[b]));
    for (int mask = 0; mask < 16; ++mask) {
        int hits = 0;
        for (auto& c : cat) hits += pinned_isomorphism(digraph(mask), c).has_value();
        CHECK(hits == 1);
    }
}
