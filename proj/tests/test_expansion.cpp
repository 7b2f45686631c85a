#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cylspace/expansion.hpp"
#include "cylspace/io.hpp"
#include "cylspace/points.hpp"
#include "cylspace/topologization.hpp"

using namespace cyl;

namespace {

const CylSpace& pure2() {
    static const auto S = parse_space(read_file(SAMPLES_DIR "/pure2.space"), "pure2");
    return S;
}

const CylSpace& rigid_g1() {
    static const auto S = to_explicit(build_topologization(g1(), 2).space);
    return S;
}

// Equality patterns of α variables over a 2-element pure set: set partitions into at most two blocks.
int equality_types(int alpha) {
    std::set<std::vector<int>> seen;
    for (int code = 0; code < (1 << alpha); ++code) {
        std::vector<int> v(alpha), label(2, -1);
        int next = 0;
        for (int i = 0; i < alpha; ++i) {
            int x = code >> i & 1;
            if (label[x] < 0) label[x] = next++;
            v[i] = label[x];
        }
        seen.insert(v);
    }
    return (int)seen.size();
}

}  // namespace

TEST_CASE("atoms of the pure 2-set context") {
    auto ctx = make_expansion_context(pure2(), 3);
    CHECK(ctx.report.ok());
    auto en = enumerate_atoms(ctx);
    CHECK(en.atoms.size() == 4);
    CHECK((int)en.atoms.size() == equality_types(3));
    for (auto& x : en.atoms) CHECK(is_atom(ctx, x).ok());

    const auto& D = pure2().D(0, 1);
    int id = ctx.identity_map();
    auto x = extend_to_atom(ctx, id, ctx.set_index.at(D));
    CHECK(is_atom(ctx, x).ok());
    std::vector<PointSet> fiber;
    for (int u = 0; u < (int)ctx.sets.size(); ++u)
        if (ctx.member(x, id, u)) fiber.push_back(ctx.sets[u]);
    std::sort(fiber.begin(), fiber.end());
    std::vector<PointSet> expect{D, pure2().all()};
    std::sort(expect.begin(), expect.end());
    CHECK(fiber == expect);

    int full = ctx.set_index.at(pure2().all());
    for (int r = 0; r < (int)ctx.maps.size(); ++r) CHECK(ctx.member(extend_to_atom(ctx, r, full), r, full));
    CHECK_THROWS_AS(extend_to_atom(ctx, id, ctx.set_index.at(pure2().none())), error);
}

TEST_CASE("is_atom rejects broken candidates") {
    auto ctx = make_expansion_context(pure2(), 3);
    auto x = enumerate_atoms(ctx).atoms.front();
    int id = ctx.identity_map();

    auto both = ctx.pairs(x);
    for (int u = 0; u < (int)ctx.sets.size(); ++u) both[ctx.node(id, u)] = 1;
    auto R1 = is_atom(ctx, both);
    CHECK_FALSE(R1.ok());
    CHECK(R1.find("exactly one of (ρ,u), (ρ,−u)")->status == Status::Fail);

    auto missing = ctx.pairs(x);
    missing[ctx.node(id, ctx.set_index.at(pure2().all()))] = 0;
    auto R2 = is_atom(ctx, missing);
    CHECK_FALSE(R2.ok());
    auto* up = R2.find("upward closed");
    REQUIRE(up);
    CHECK(up->status == Status::Fail);
    CHECK_FALSE(up->witness.empty());
}

TEST_CASE("expansions are FOL spaces") {
    for (int alpha : {2, 3}) {
        auto ctx = make_expansion_context(pure2(), alpha);
        auto X = build_expansion(ctx);
        CHECK(X.report.ok());
        CHECK(X.space.dim == alpha);
        CHECK(is_t2(X.space));
        CHECK(check_space_axioms(X.space).ok());
    }
    auto X3 = build_expansion(make_expansion_context(pure2(), 3));
    CHECK(X3.space.points == 4);
    CHECK_THROWS_AS(expansion_map(make_expansion_context(pure2(), 3), X3), error);
}

TEST_CASE("rigid base with α = β") {
    auto ctx = make_expansion_context(rigid_g1(), 2);
    auto X = build_expansion(ctx);
    CHECK(X.space.points == rigid_g1().points);
    CHECK(check_space_axioms(X.space).ok());

    auto f = expansion_map(ctx, X);
    auto F = classify_mapping(X.space, rigid_g1(), f);
    CHECK(F.s_mapping);
    CHECK(F.c_mapping);
    CHECK(F.basis_preserving);
    CHECK(F.surjective);

    auto g = base_injection(ctx, X);
    auto G = classify_mapping(rigid_g1(), X.space, g);
    CHECK(G.homeomorphism);
    for (int a = 0; a < rigid_g1().points; ++a) CHECK(f[g[a]] == a);

    auto R = verify_expansion_uniqueness(ctx, X, X);
    CHECK(R.ok());
}

TEST_CASE("raising the rigid base") {
    auto ctx = make_expansion_context(rigid_g1(), 3);
    auto X = build_expansion(ctx);
    CHECK(check_space_axioms(X.space).ok());
    auto F = classify_mapping(X.space, rigid_g1(), expansion_map(ctx, X));
    CHECK(F.c_mapping);
    CHECK(F.basis_preserving);
    CHECK(F.surjective);
}

TEST_CASE("two well-orderings give homeomorphic expansions") {
    auto ctx = make_expansion_context(pure2(), 3);
    auto X1 = build_expansion(ctx);
    auto X2 = build_expansion(ctx, AtomOrder{true});
    auto R = verify_expansion_uniqueness(ctx, X1, X2);
    CHECK(R.ok());
}

TEST_CASE("one-point base") {
    CylSpace S;
    S.points = 1;
    S.dim = 1;
    S.eq = {Partition::single(1)};
    S.diag = {S.all()};
    S.basis.sets = {S.none(), S.all()};
    for (int alpha : {1, 2, 3}) {
        auto ctx = make_expansion_context(S, alpha);
        CHECK(enumerate_atoms(ctx).atoms.size() == 1);
        auto X = build_expansion(ctx);
        CHECK(X.space.points == 1);
        CHECK(expansion_map(ctx, X) == std::vector<int>{0});
    }
}

TEST_CASE("tuple presentation agrees with copy programs") {
    auto ctx = make_expansion_context(pure2(), 3);
    auto X = build_expansion(ctx);
    REQUIRE(X.space.presentation);
    Calculus K(X.space);
    int compared = 0;
    for (auto& u : X.space.basis.sets)
        for (auto& rho : K.total_maps()) {
            PointSet copied;
            try {
                copied = permute_any(X.space, u, rho);
            } catch (const resource_error&) {
                continue;
            }
            CHECK(permute_by_presentation(X.space, *X.space.presentation, u, rho) == copied);
            ++compared;
        }
    CHECK(compared > 0);
}
