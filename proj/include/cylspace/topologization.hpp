#pragma once

#include "space.hpp"

#include <memory>

namespace cyl {

inline constexpr int default_point_limit = 4096;

// Assignments of {0..m-1} to n coordinates, coordinate 0 most significant.
struct AssignmentIndex {
    int m = 1, n = 0;
    int count() const {
        int c = 1;
        for (int i = 0; i < n; ++i) c *= m;
        return c;
    }
    Assignment decode(int p) const {
        Assignment a(n);
        for (int i = n - 1; i >= 0; --i, p /= m) a[i] = p % m;
        return a;
    }
    int encode(const Assignment& a) const {
        int p = 0;
        for (int x : a) p = p * m + x;
        return p;
    }
};

// Interpretation of formulas as point sets of a topologization space.
struct Formation {
    std::shared_ptr<const FiniteStructure> structure;
    AssignmentIndex index;

    PointSet interpret(const Formula& f) const {
        int mv = max_var(f);
        if (mv >= index.n)
            throw error("variable v" + std::to_string(mv) + " outside budget " + std::to_string(index.n));
        PointSet out(index.count());
        for (int p = 0; p < index.count(); ++p) {
            auto a = index.decode(p);
            if (detail::eval_rec(*structure, f, a)) out.insert(p);
        }
        return out;
    }
};

struct Topologization {
    CylSpace space;
    Formation formation;
    std::vector<Perm> aut;

    bool t2() const { return aut.size() == 1; }
    const FiniteStructure& structure() const { return *formation.structure; }
    int point(const Assignment& a) const { return formation.index.encode(a); }
    Assignment assignment(int p) const { return formation.index.decode(p); }
    PointSet interpret(const Formula& f) const { return formation.interpret(f); }
    PointSet interpret(std::string_view text) const { return interpret(parse_formula(text, structure().sig)); }
};

inline Topologization build_topologization(const FiniteStructure& A, int n, int point_limit = default_point_limit) {
    if (n < 1) throw error("budget n must be at least 1");
    long long total = 1;
    for (int i = 0; i < n; ++i) {
        total *= A.domain_size;
        if (total > point_limit)
            throw resource_error(std::to_string(A.domain_size) + "^" + std::to_string(n) +
                                 " assignments exceed the point limit " + std::to_string(point_limit));
    }
    Topologization T;
    T.formation.structure = std::make_shared<const FiniteStructure>(A);
    T.formation.index = {A.domain_size, n};
    const auto& ix = T.formation.index;
    const int N = ix.count();
    auto& S = T.space;
    S.name = A.name.empty() ? "C(A)" : "C(" + A.name + ")";
    S.points = N;
    S.dim = n;
    for (int p = 0; p < N; ++p) S.labels.push_back(ix.decode(p));

    for (int i = 0; i < n; ++i) {
        std::vector<int> lab(N);
        for (int p = 0; p < N; ++p) {
            auto a = S.labels[p];
            a[i] = 0;
            lab[p] = ix.encode(a);
        }
        S.eq.push_back(Partition::from_labels(lab));
    }
    S.diag.assign(n * n, PointSet(N));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int p = 0; p < N; ++p)
                if (S.labels[p][i] == S.labels[p][j]) S.diag[i * n + j].insert(p);

    T.aut = automorphisms(A);
    DisjointSets ds(N);
    for (auto& sigma : T.aut)
        for (int p = 0; p < N; ++p) ds.unite(p, ix.encode(apply_perm(sigma, S.labels[p])));
    S.basis.kind = Basis::Kind::OrbitRule;
    S.basis.atoms = ds.partition();
    S.basis.source = T.formation.structure;
    return T;
}

inline void require_orbit_rule(const CylSpace& S, const char* op) {
    if (S.is_explicit()) throw error(std::string(op) + " needs an orbit-rule basis, space has an explicit list");
}

inline bool is_definable(const CylSpace& S, const PointSet& u) {
    require_orbit_rule(S, "is_definable");
    return open_hull(S, u) == u;
}

inline const Partition& orbits(const CylSpace& S) {
    require_orbit_rule(S, "orbits");
    return S.basis.atoms;
}

// Assignments listing every element of the structure.
inline PointSet domain_points(const Topologization& T) {
    const int m = T.structure().domain_size;
    PointSet out(T.space.points);
    for (int p = 0; p < T.space.points; ++p) {
        std::vector<char> seen(m, 0);
        for (int x : T.space.labels[p]) seen[x] = 1;
        if (std::all_of(seen.begin(), seen.end(), [](char c) { return c; })) out.insert(p);
    }
    return out;
}

}  // namespace cyl
