#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cylspace/points.hpp"
#include "cylspace/topologization.hpp"

using namespace cyl;

TEST_CASE("complete closed sets") {
    auto T = build_topologization(g1(), 3);
    Calculus K(T.space);
    int a = T.point({0, 1, 1});
    CHECK(K.complete_closed(a, all_indices(3)) == PointSet::of(8, {a}));
    for (IndexSet s = 0; s < 8; ++s) {
        auto block = K.complete_closed(a, s);
        CHECK(block.contains(a));
        block.for_each([&](int b) { CHECK(K.complete_closed(b, s) == block); });
        CHECK((dimension_set(T.space, block) & ~s) == 0);
    }

    auto P = build_topologization(pure_set(2), 2);
    Calculus KP(P.space);
    CHECK(KP.complete_closed(P.point({0, 1}), all_indices(2)) == PointSet::of(4, {P.point({0, 1}), P.point({1, 0})}));
}

TEST_CASE("permuting points") {
    auto T = build_topologization(g1(), 3);
    Calculus K(T.space);
    int a = T.point({0, 1, 1});
    CHECK(K.permute_point(VarMap::identity(3), a) == a);
    // the pullback b with b(ρ(j)) = a(j)
    CHECK(K.permute_point(VarMap::total({1, 2, 0}), a) == T.point({1, 0, 1}));
    for (auto& rho : VarMap::all_total(3))
        if (rho.surjective())
            for (int p = 0; p < 8; ++p) {
                auto x = T.assignment(p), y = T.assignment(K.permute_point(rho, p));
                for (int j = 0; j < 3; ++j) CHECK(y[rho(j)] == x[j]);
            }
    CHECK_THROWS_AS(K.permute_point(VarMap::total({0, 0, 2}), a), error);
    CHECK_THROWS_AS(K.permute_point(VarMap::total({0, 0, 1}), T.point({0, 0, 1})), error);

    auto P = build_topologization(pure_set(2), 2);
    Calculus KP(P.space);
    CHECK_THROWS_AS(KP.permute_point(VarMap::identity(2), 0), error);
}

TEST_CASE("factors") {
    auto T = build_topologization(g1(), 3);
    Calculus K(T.space);
    int a = T.point({0, 1, 0});
    CHECK(K.factor(VarMap::identity(3), a, a));
    VarMap partial(3);
    partial.to[0] = 2;
    partial.to[1] = 1;
    CHECK(K.factor(partial, a, T.point({1, 1, 0})));
    CHECK_FALSE(K.factor(partial, a, T.point({1, 0, 1})));
    VarMap empty(3);
    for (int b = 0; b < 8; ++b) CHECK(K.factor(empty, a, b) == K.complete_closed(a, 0).contains(b));

    auto w = K.exists_factor(a, a, true);
    REQUIRE(w);
    CHECK(w->equivalence);
    // a constant point cannot cover two distinct elements
    CHECK_FALSE(K.exists_factor(T.point({0, 1, 1}), T.point({1, 1, 1}), true));
    CHECK(K.exists_factor(T.point({0, 1, 1}), T.point({1, 0, 0}), true));
    CHECK(K.exists_factor(T.point({0, 1, 1}), T.point({1, 0, 1}), true));
}

TEST_CASE("model points") {
    auto T = build_topologization(g1(), 3);
    Calculus K(T.space);
    auto dom = domain_points(T);
    dom.for_each([&](int p) {
        auto f = K.model_flags(p);
        CHECK(f.model);
        CHECK(f.big);
    });
    CHECK_FALSE(K.is_model(T.point({0, 0, 0})));
    CHECK_FALSE(K.is_model(T.point({1, 1, 1})));

    int a = T.point({0, 0, 0});
    auto found = K.find_model_point(K.complete_closed(a, 0), a);
    REQUIRE(found);
    CHECK(K.is_model(*found));
    CHECK(K.exists_factor(a, *found, false));

    auto one = build_topologization(pure_set(1), 2);
    CHECK(Calculus(one.space).is_model(0));

    auto small = build_topologization(g1(), 1);
    Calculus KS(small.space);
    CHECK_FALSE(KS.find_model_point(small.space.all(), 0));
}

TEST_CASE("point laws") {
    auto T = build_topologization(g1(), 3);
    auto R = verify_point_laws(T.space);
    CHECK(R.ok());
    for (auto& r : R.results) {
        CHECK(r.status == Status::Pass);
        CHECK(r.checked > 0);
    }
    auto P = verify_point_laws(build_topologization(pure_set(2), 3).space);
    for (auto& r : P.results) CHECK(r.status == Status::Skipped);
}

TEST_CASE("a point lies in exactly its own identity preimage") {
    auto T = build_topologization(g1(), 3);
    Calculus K(T.space);
    for (int a = 0; a < 8; ++a) {
        int hits = 0;
        for (int c = 0; c < 8; ++c) hits += K.permute_points(c, VarMap::identity(3)).contains(a);
        CHECK(hits == 1);
    }
}
