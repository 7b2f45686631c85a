#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cylspace/model_space.hpp"

using namespace cyl;

TEST_CASE("model space sizes") {
    auto M1 = build_model_space({g1()}, 3);
    CHECK(M1.space.points == 8);
    auto M2 = build_model_space({g1(), g2()}, 3);
    CHECK(M2.space.points == 8);
    // G2 assignments land on their swapped G1 counterparts
    for (int p = 0; p < 8; ++p) {
        auto a = M2.index[1].decode(p);
        Assignment swapped;
        for (int x : a) swapped.push_back(1 - x);
        CHECK(M2.class_map[1][p] == M2.point_of(0, swapped));
    }
    CHECK(build_model_space({pure_set(1)}, 2).space.points == 1);
    CHECK(build_model_space({pure_set(2)}, 2).space.points == 2);

    CHECK_THROWS_AS(build_model_space({g1(), pure_set(2)}, 3), error);
    CHECK_THROWS_AS(build_model_space({pure_set(3)}, 2), resource_error);
}

TEST_CASE("model spaces pass their suites") {
    std::vector<std::vector<FiniteStructure>> catalogs{
        {g1()}, {g1(), g2()}, {pure_set(1)}, {pure_set(2)}, {g1(), digraph(0, 2, "E0")}, digraph_catalog()};
    for (auto& c : catalogs) {
        auto MS = build_model_space(c, 3);
        Calculus K(MS.space);
        auto R = verify_model_space(MS, K);
        CHECK(R.ok());
        for (auto& r : R.results)
            if (r.status == Status::Fail) FAIL_CHECK(r.law << ": " << r.witness);
        CHECK(is_t2(MS.space));
    }
}

TEST_CASE("canonical maps") {
    auto M1 = build_model_space({g1()}, 3);
    auto T = build_topologization(g1(), 3);
    auto F = classify_mapping(T.space, M1.space, canonical_map(M1, 0));
    CHECK(F.homeomorphism);

    auto P = build_model_space({pure_set(2)}, 2);
    auto TP = build_topologization(pure_set(2), 2);
    auto& f = canonical_map(P, 0);
    CHECK(std::set<int>(f.begin(), f.end()).size() == 2);
    auto FP = classify_mapping(TP.space, P.space, f);
    CHECK(FP.s_mapping);
    CHECK(FP.c_mapping);
    CHECK(FP.basis_preserving);
    auto R = certify_canonical_map(P, 0);
    CHECK(R.ok());
    CHECK(R.find("no other formula-respecting C-map")->status == Status::Pass);

    auto one = build_model_space({pure_set(1)}, 2);
    CHECK(canonical_map(one, 0) == std::vector<int>{0});
}

TEST_CASE("representing model points") {
    auto MS = build_model_space({g1()}, 3);
    Calculus K(MS.space);
    auto rep = represent_model_point(MS, K, MS.point_of(0, {0, 1, 1}));
    CHECK(pinned_isomorphism(rep, g1()).has_value());
    CHECK_THROWS_AS(represent_model_point(MS, K, MS.point_of(0, {0, 0, 0})), error);

    auto one = build_model_space({pure_set(1)}, 2);
    Calculus K1(one.space);
    CHECK(represent_model_point(one, K1, 0).domain_size == 1);
}

TEST_CASE("embedding verdicts") {
    auto MS = build_model_space({g1(), g2(), digraph(0, 2, "E0")}, 3);
    Calculus K(MS.space);
    int a = MS.point_of(0, {0, 1, 0}), b = MS.point_of(1, {1, 0, 1}), c = MS.point_of(2, {0, 1, 0});
    auto same = decide_embedding(MS, K, a, b);
    CHECK(same.topological);
    CHECK(same.oracle);
    auto other = decide_embedding(MS, K, a, c);
    CHECK_FALSE(other.topological);
    CHECK_FALSE(other.oracle);
    auto self = decide_embedding(MS, K, a, a);
    CHECK(self.agree());
    CHECK(self.topological);
    CHECK_THROWS_AS(decide_embedding(MS, K, MS.point_of(0, {1, 1, 1}), a), error);

    auto pins = parse_pins("0:0", 3);
    auto v = decide_partial_embedding(MS, K, MS.point_of(0, {0, 0, 0}), MS.point_of(0, {0, 1, 1}), pins);
    CHECK(v.topological);
    CHECK(v.agree());
    CHECK_THROWS_AS(parse_pins("0:0,0:1", 3), error);
    CHECK_THROWS_AS(parse_pins("0-1", 3), error);
}

TEST_CASE("counting isomorphism classes") {
    auto count = [](std::vector<FiniteStructure> c, int n) {
        auto MS = build_model_space(c, n);
        Calculus K(MS.space);
        return count_iso_classes(MS, K);
    };
    CHECK(count({g1(), g2()}, 3) == 1);
    CHECK(count({g1(), digraph(0, 2, "E0")}, 3) == 2);
    CHECK(count({pure_set(1)}, 2) == 1);
    CHECK(count(digraph_catalog(), 3) == 10);
    CHECK(count_iso_classes_oracle(digraph_catalog()) == 10);
}

TEST_CASE("type spaces") {
    CHECK(type_space(g1(), 1, {}).types.size() == 2);
    CHECK(type_space(pure_set(2), 1, {}).types.size() == 1);
    CHECK(type_space(pure_set(2), 1, {0}).types.size() == 2);
    for (int mask = 0; mask < 16; ++mask) {
        auto A = digraph(mask);
        for (int k = 1; k <= 2; ++k)
            for (std::set<int> B : {std::set<int>{}, std::set<int>{0}, std::set<int>{1}})
                CHECK((int)type_space(A, k, B).types.size() == type_count_by_orbits(A, k, B));
    }
}

TEST_CASE("type spaces as complete closed sets") {
    auto P = build_model_space({pure_set(2)}, 3);
    Calculus K(P.space);
    auto E = type_space_embedding(P, K, 0, 1, {0}, {2});
    CHECK(E.report.ok());
    CHECK(E.blocks.size() == 2);

    auto E0 = type_space_embedding(P, K, 0, 1, {}, {});
    CHECK(E0.report.ok());
    CHECK(E0.blocks.size() == 1);

    auto one = build_model_space({pure_set(1)}, 2);
    Calculus K1(one.space);
    auto E1 = type_space_embedding(one, K1, 0, 1, {}, {});
    CHECK(E1.report.ok());
    CHECK(E1.closed.size() == 1);

    CHECK_THROWS_AS(type_space_embedding(P, K, 0, 2, {0, 1}, {2, 1}), error);
    CHECK_THROWS_AS(type_space_embedding(P, K, 0, 3, {0}, {2}), resource_error);
}
