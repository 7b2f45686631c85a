#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cylspace/io.hpp"
#include "cylspace/topologization.hpp"

using namespace cyl;

namespace {

const Topologization& g1_space() {
    static const auto T = build_topologization(g1(), 3);
    return T;
}

CylSpace one_point(int n) {
    CylSpace S;
    S.points = 1;
    S.dim = n;
    S.eq.assign(n, Partition::single(1));
    S.diag.assign(n * n, PointSet::full(1));
    S.basis.sets = {S.none(), S.all()};
    return S;
}

}  // namespace

TEST_CASE("saturation and dimension sets") {
    auto& T = g1_space();
    const auto& S = T.space;
    auto e = T.interpret("E(v0,v1)");
    auto sat = saturate(S, e, 0);
    CHECK(sat.size() == 4);
    CHECK(sat == T.interpret("v1 = v1 & exists v0 E(v0,v1)"));
    sat.for_each([&](int p) { CHECK(T.assignment(p)[1] == 1); });
    CHECK(saturate(S, S.none(), 1).empty());
    CHECK(saturate(S, S.all(), 2) == S.all());

    // E(x,y) holds exactly when y = 1, so v0 is not free in the set
    CHECK(dimension_set(S, e) == bit(1));
    CHECK(dimension_set(S, T.interpret("E(v0,v1) & !E(v1,v0)")) == (bit(0) | bit(1)));
    CHECK(dimension_set(S, S.none()) == 0);
    CHECK(dimension_set(S, S.D(0, 1)) == (bit(0) | bit(1)));
    CHECK_THROWS_AS(saturate(S, e, 3), error);
}

TEST_CASE("substitution on sets") {
    auto& T = g1_space();
    const auto& S = T.space;
    auto e = T.interpret("E(v0,v1)");
    CHECK(subst_set(S, e, 1, 0) == T.interpret("E(v1,v1)"));
    CHECK(subst_set(S, e, 2, 2) == e);
    CHECK(subst_set(S, S.none(), 0, 1).empty());

    // set-level substitution mirrors variable substitution in formulas
    for (auto text : {"E(v0,v1)", "exists v2 E(v2,v0)", "E(v0,v2) & !(v1 = v2)"}) {
        auto f = parse_formula(text, T.structure().sig);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(subst_set(S, T.interpret(f), j, i) == T.interpret(substitute_var(f, i, j, 3)));
    }
}

TEST_CASE("permutation of sets") {
    auto T = build_topologization(g1(), 4);
    const auto& S = T.space;
    auto e = T.interpret("E(v0,v1)");
    auto swap = VarMap::total({1, 0, 2, 3});
    CHECK(permute_set(S, e, swap) == T.interpret("E(v1,v0)"));
    CHECK(permute_set(S, e, VarMap::identity(4)) == e);
    CHECK(permute_set(S, S.none(), swap).empty());

    // engines agree with direct evaluation of the renamed formula
    auto f = parse_formula("E(v0,v1) & !(v1 = v2)", T.structure().sig);
    for (auto& rho : VarMap::all_total(3, 4)) {
        VarMap full(4);
        for (int i = 0; i < 3; ++i) full.to[i] = rho(i);
        auto renamed = parse_formula("E(v" + std::to_string(rho(0)) + ",v" + std::to_string(rho(1)) + ") & !(v" +
                                         std::to_string(rho(1)) + " = v" + std::to_string(rho(2)) + ")",
                                     T.structure().sig);
        auto expect = T.interpret(renamed);
        CHECK(permute_any(S, T.interpret(f), full) == expect);
        if (auto c = coordinatize(S)) CHECK(permute_by_coordinates(S, *c, T.interpret(f), full) == expect);
    }
}

TEST_CASE("the literal schedule needs spare indices") {
    auto& T = g1_space();
    auto cycle = VarMap::total({1, 2, 0});
    auto d = T.interpret("v0 = v1");
    CHECK_THROWS_AS(permute_set(T.space, d, cycle), resource_error);
    CHECK(permute_set_compact(T.space, d, cycle) == T.interpret("v1 = v2"));
    auto e = T.interpret("E(v0,v1)");
    CHECK(permute_set(T.space, e, cycle) == T.interpret("E(v1,v2)"));
}

TEST_CASE("axiom checks") {
    CHECK(check_space_axioms(g1_space().space).ok());
    CHECK(check_space_axioms(one_point(2)).ok());

    auto S = g1_space().space;
    int victim = S.D(0, 1).first();
    S.diag[0 * 3 + 1].erase(victim);
    S.diag[1 * 3 + 0].erase(victim);
    auto R = check_space_axioms(S);
    CHECK_FALSE(R.ok());
    auto* u = R.find("diagonal uniqueness |[a]_i ∩ D_ij| = 1");
    REQUIRE(u);
    CHECK(u->status == Status::Fail);
    CHECK_FALSE(u->witness.empty());
}

TEST_CASE("substitution laws") {
    auto R = verify_substitution_laws(g1_space().space);
    CHECK(R.ok());
    auto* skipped = R.find("complement law, i=j");
    REQUIRE(skipped);
    CHECK(skipped->status == Status::Skipped);
    for (auto& r : R.results)
        if (r.status == Status::Fail) FAIL_CHECK(r.law << ": " << r.witness);

    auto P = verify_substitution_laws(build_topologization(pure_set(2), 3).space);
    CHECK(P.ok());
    auto* fresh = P.find("fresh-index independence");
    REQUIRE(fresh);
    CHECK(fresh->status != Status::Fail);
}

TEST_CASE("mapping classification") {
    const auto& S = g1_space().space;
    std::vector<int> id(S.points);
    std::iota(id.begin(), id.end(), 0);
    auto F = classify_mapping(S, S, id);
    CHECK(F.s_mapping);
    CHECK(F.c_mapping);
    CHECK(F.basis_preserving);
    CHECK(F.homeomorphism);

    CylSpace two;
    two.points = 2;
    two.dim = 1;
    two.eq = {Partition::discrete(2)};
    two.diag = {two.all()};
    two.basis.sets = {two.none(), PointSet::of(2, {0}), PointSet::of(2, {1}), two.all()};
    auto C = classify_mapping(two, two, {0, 0});
    CHECK(C.s_mapping);
    CHECK_FALSE(C.injective);
    CHECK_FALSE(C.homeomorphism);
}

TEST_CASE("explicit space files") {
    auto S = parse_space(read_file(SAMPLES_DIR "/pure2.space"), "pure2");
    CHECK(S.points == 4);
    CHECK(S.dim == 2);
    CHECK(S.basis.sets.size() == 4);
    CHECK(check_space_axioms(S).ok());
    auto again = parse_space(format_space(S));
    CHECK(again.basis.sets == S.basis.sets);
    CHECK(again.D(0, 1) == S.D(0, 1));

    CHECK_THROWS_AS(parse_space("points 2\ndim 1\neq 0: {0}{1}\nend\n"), parse_error);
    CHECK_THROWS_AS(parse_space("points 2\ndim 1\neq 0: {0}{3}\nbasis: {}\nend\n"), parse_error);
    try {
        parse_space("points 2\ndim 1\nbogus\n");
        FAIL("no error");
    } catch (const parse_error& e) {
        CHECK(e.line == 3);
    }
}
