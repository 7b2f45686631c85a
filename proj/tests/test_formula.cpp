#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cylspace/structure.hpp"

using namespace cyl;

namespace {

Signature digraph_sig() {
    Signature s;
    s.add("E", 2);
    return s;
}

// Truth set over every assignment of n variables into A.
std::vector<bool> truth_table(const FiniteStructure& A, const Formula& f, int n) {
    std::vector<bool> out;
    Assignment a(n, 0);
    while (true) {
        out.push_back(evaluate(A, f, a));
        int i = n - 1;
        while (i >= 0 && ++a[i] == A.domain_size) a[i--] = 0;
        if (i < 0) break;
    }
    return out;
}

}  // namespace

TEST_CASE("atomic and equality literals parse to their nodes") {
    auto sig = digraph_sig();
    CHECK(parse_formula("E(v0,v1)", sig) == Formula::atomic("E", {0, 1}));
    CHECK(parse_formula("v0 = v0", sig) == Formula::equal(0, 0));
}

TEST_CASE("forall and implication desugar to negation, conjunction and exists") {
    auto sig = digraph_sig();
    auto f = parse_formula("forall v2 (E(v0,v2) -> v2 = v1)", sig);
    auto expect = Formula::negate(Formula::exists(
        2, Formula::negate(Formula::negate(Formula::conj(Formula::atomic("E", {0, 2}),
                                                          Formula::negate(Formula::equal(2, 1)))))));
    CHECK(f == expect);
    CHECK(f.kind() == Formula::Kind::Not);
}

TEST_CASE("render round-trips through the parser") {
    auto sig = digraph_sig();
    for (auto text : {"E(v0,v1)", "exists v2 (E(v0,v2) & !(v2 = v1))", "forall v0 E(v0,v0) | v1 = v2",
                      "!exists v1 E(v1,v1)"}) {
        auto f = parse_formula(text, sig);
        CHECK(parse_formula(render(f), sig) == f);
    }
}

TEST_CASE("parse errors carry a position") {
    auto sig = digraph_sig();
    CHECK_THROWS_AS(parse_formula("E(v0", sig), parse_error);
    CHECK_THROWS_AS(parse_formula("R(v0,v1)", sig), parse_error);
    CHECK_THROWS_AS(parse_formula("E(v0)", sig), parse_error);
    try {
        parse_formula("E(v0,v1) &", sig);
        FAIL("no error");
    } catch (const parse_error& e) {
        CHECK(e.line == 1);
        CHECK(e.column > 1);
    }
}

TEST_CASE("free variables") {
    CHECK(free_vars(Formula::equal(0, 1)) == std::set<int>{0, 1});
    CHECK(free_vars(Formula::exists(1, Formula::atomic("E", {0, 1}))) == std::set<int>{0});
    CHECK(free_vars(Formula::exists(0, Formula::equal(0, 0))).empty());
}

TEST_CASE("substitution of free variables") {
    CHECK(substitute_var(Formula::atomic("E", {0, 1}), 0, 2, 3) == Formula::atomic("E", {2, 1}));
    auto f = Formula::exists(1, Formula::equal(0, 1));
    CHECK(substitute_var(f, 0, 0, 3) == f);

    // capture is avoided by renaming the bound variable
    auto g = substitute_var(f, 0, 1, 3);
    CHECK(g.kind() == Formula::Kind::Exists);
    CHECK(g.bound_var() != 1);
    CHECK(free_vars(g) == std::set<int>{1});
    auto A = pure_set(2);
    for (bool t : truth_table(A, g, 3)) CHECK(t);
}

TEST_CASE("substitution agrees with evaluation on shifted assignments") {
    auto A = g1();
    auto sig = A.sig;
    for (auto text : {"E(v0,v1)", "exists v2 E(v0,v2)", "exists v1 (E(v0,v1) & !(v1 = v2))", "forall v1 E(v1,v0)"}) {
        auto f = parse_formula(text, sig);
        for (int from = 0; from < 3; ++from)
            for (int to = 0; to < 3; ++to) {
                auto g = substitute_var(f, from, to, 4);
                Assignment a(4, 0);
                for (int code = 0; code < 16; ++code) {
                    for (int i = 0; i < 4; ++i) a[i] = (code >> (3 - i)) & 1;
                    auto b = a;
                    b[from] = a[to];
                    CHECK(evaluate(A, g, a) == evaluate(A, f, b));
                }
            }
    }
}

TEST_CASE("substitution without a free index for renaming is a resource error") {
    auto f = Formula::exists(1, Formula::conj(Formula::equal(0, 1), Formula::equal(1, 1)));
    CHECK_THROWS_AS(substitute_var(f, 0, 1, 2), resource_error);
}
