#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cylspace/io.hpp"
#include "cylspace/topologization.hpp"

using namespace cyl;

TEST_CASE("topologization sizes") {
    auto T = build_topologization(g1(), 3);
    CHECK(T.space.points == 8);
    CHECK(T.space.D(0, 1).size() == 4);
    CHECK(T.t2());

    auto one = build_topologization(pure_set(1), 2);
    CHECK(one.space.points == 1);
    CHECK(one.space.D(0, 1) == one.space.all());

    auto P = build_topologization(pure_set(2), 2);
    CHECK(P.space.points == 4);
    auto E = to_explicit(P.space);
    std::vector<PointSet> expect{P.space.none(), P.space.D(0, 1), ~P.space.D(0, 1), P.space.all()};
    std::sort(expect.begin(), expect.end());
    CHECK(E.basis.sets == expect);

    CHECK_THROWS_AS(build_topologization(pure_set(3), 8, 1000), resource_error);
}

TEST_CASE("formation") {
    auto T = build_topologization(g1(), 3);
    auto e = T.interpret("E(v0,v1)");
    PointSet expect(8);
    for (int x = 0; x < 2; ++x) {
        expect.insert(T.point({0, 1, x}));
        expect.insert(T.point({1, 1, x}));
    }
    CHECK(e == expect);
    CHECK(T.interpret("v0 = v0") == T.space.all());
    CHECK(T.interpret("exists v0 exists v1 E(v0,v1)") == T.space.all());
    CHECK(T.interpret("v0 = v2") == T.space.D(0, 2));
    CHECK_THROWS_AS(T.interpret("E(v0,v3)"), error);

    // ¬, ∧ and ∃ become complement, intersection and saturation
    auto f = parse_formula("E(v0,v1)", T.structure().sig);
    auto g = parse_formula("E(v1,v2)", T.structure().sig);
    CHECK(T.interpret(Formula::negate(f)) == ~T.interpret(f));
    CHECK(T.interpret(Formula::conj(f, g)) == (T.interpret(f) & T.interpret(g)));
    for (int i = 0; i < 3; ++i) CHECK(T.interpret(Formula::exists(i, f)) == saturate(T.space, T.interpret(f), i));
}

TEST_CASE("definability and orbits") {
    auto P = build_topologization(pure_set(2), 2);
    PointSet single(4);
    single.insert(P.point({0, 1}));
    CHECK_FALSE(is_definable(P.space, single));
    CHECK(is_definable(P.space, P.space.D(0, 1)));
    CHECK(orbits(P.space).count() == 2);
    PointSet swapped = single;
    swapped.insert(P.point({1, 0}));
    CHECK(closure(P.space, single) == swapped);
    CHECK(closure(P.space, P.space.none()) == P.space.none());
    CHECK(is_dense_in(P.space, single, single));

    auto G = build_topologization(g1(), 2);
    CHECK(orbits(G.space).count() == G.space.points);
    for (int code = 0; code < 16; ++code) {
        PointSet u(4);
        for (int p = 0; p < 4; ++p)
            if (code >> p & 1) u.insert(p);
        CHECK(is_definable(G.space, u));
    }
    CHECK(orbits(build_topologization(pure_set(1), 3).space).count() == 1);
}

TEST_CASE("domain points") {
    CHECK(domain_points(build_topologization(g1(), 3)).size() == 6);
    CHECK(domain_points(build_topologization(g1(), 1)).empty());
    CHECK(domain_points(build_topologization(pure_set(1), 2)).size() == 1);
}

TEST_CASE("topologization spaces satisfy the axioms") {
    for (int mask = 0; mask < 16; ++mask)
        for (int n = 1; n <= 3; ++n) {
            auto T = build_topologization(digraph(mask), n);
            auto R = check_space_axioms(T.space);
            CHECK_MESSAGE(R.ok(), "digraph ", mask, " n=", n);
        }
    for (int m = 1; m <= 3; ++m) CHECK(check_space_axioms(build_topologization(pure_set(m), 3).space).ok());
}
