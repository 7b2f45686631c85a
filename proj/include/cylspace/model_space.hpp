#pragma once

#include "points.hpp"
#include "topologization.hpp"

#include <random>

namespace cyl {

// Quotient of the catalog's assignment spaces by type equality. With n at least every domain
// size, two assignments have the same type exactly when an isomorphism carries one to the other.
struct ModelSpace {
    CylSpace space;
    std::vector<FiniteStructure> catalog;
    std::vector<AssignmentIndex> index;            // per catalog member
    std::vector<std::vector<int>> class_map;       // [member][assignment] → point
    std::vector<std::pair<int, Assignment>> rep;   // per point: a member and an assignment
    std::vector<int> iso_class;                    // per member: least isomorphic member

    int dim() const { return space.dim; }
    const FiniteStructure& structure_of(int p) const { return catalog[rep[p].first]; }

    PointSet interpret(const Formula& f) const {
        if (max_var(f) >= dim()) throw error("formula variable outside budget " + std::to_string(dim()));
        PointSet out(space.points);
        for (int p = 0; p < space.points; ++p)
            if (evaluate(catalog[rep[p].first], f, rep[p].second)) out.insert(p);
        return out;
    }
    PointSet interpret(std::string_view text) const { return interpret(parse_formula(text, catalog.at(0).sig)); }

    int point_of(int member, const Assignment& a) const { return class_map[member][index[member].encode(a)]; }
};

inline ModelSpace build_model_space(const std::vector<FiniteStructure>& catalog, int n,
                                    int point_limit = default_point_limit) {
    if (catalog.empty()) throw error("empty catalog");
    if (n < 1) throw error("budget n must be at least 1");
    ModelSpace MS;
    MS.catalog = catalog;
    long long total = 0;
    for (auto& A : catalog) {
        if (!(A.sig == catalog[0].sig)) throw error("signature mismatch between " + catalog[0].name + " and " + A.name);
        if (A.domain_size > n)
            throw resource_error("budget n=" + std::to_string(n) + " is below the domain size " +
                                 std::to_string(A.domain_size) + " of " + A.name +
                                 "; types and isomorphism orbits only coincide from n ≥ domain size");
        AssignmentIndex ix{A.domain_size, n};
        total += ix.count();
        if (total > point_limit) throw resource_error("catalog assignments exceed the point limit " + std::to_string(point_limit));
        MS.index.push_back(ix);
    }
    const int K = (int)catalog.size();
    std::vector<Perm> to_canonical(K);
    for (int s = 0; s < K; ++s) {
        MS.iso_class.push_back(s);
        for (int t = 0; t < s; ++t) {
            if (MS.iso_class[t] != t) continue;
            if (auto sigma = pinned_isomorphism(catalog[s], catalog[t])) {
                MS.iso_class[s] = t;
                to_canonical[s] = *sigma;
                break;
            }
        }
        if (MS.iso_class[s] == s) {
            to_canonical[s].resize(catalog[s].domain_size);
            std::iota(to_canonical[s].begin(), to_canonical[s].end(), 0);
        }
    }

    // orbit classes on each canonical member, then everything else through its isomorphism
    std::vector<std::vector<int>> orbit_point(K);
    auto& S = MS.space;
    for (int t = 0; t < K; ++t) {
        if (MS.iso_class[t] != t) continue;
        auto& ix = MS.index[t];
        DisjointSets ds(ix.count());
        for (auto& sigma : automorphisms(catalog[t]))
            for (int p = 0; p < ix.count(); ++p) ds.unite(p, ix.encode(apply_perm(sigma, ix.decode(p))));
        auto P = ds.partition();
        orbit_point[t].resize(ix.count());
        for (int b = 0; b < P.count(); ++b) {
            int id = S.points++;
            MS.rep.emplace_back(t, ix.decode(P.blocks[b][0]));
            for (int p : P.blocks[b]) orbit_point[t][p] = id;
        }
    }
    for (int s = 0; s < K; ++s) {
        int t = MS.iso_class[s];
        auto& ix = MS.index[s];
        std::vector<int> row(ix.count());
        for (int p = 0; p < ix.count(); ++p)
            row[p] = orbit_point[t][MS.index[t].encode(apply_perm(to_canonical[s], ix.decode(p)))];
        MS.class_map.push_back(std::move(row));
    }

    const int N = S.points;
    S.name = "model space";
    S.dim = n;
    for (int p = 0; p < N; ++p) {
        auto& [t, a] = MS.rep[p];
        std::string nm = catalog[t].name.empty() ? "#" + std::to_string(t) : catalog[t].name;
        nm += "(";
        for (int i = 0; i < n; ++i) nm += (i ? "," : "") + std::to_string(a[i]);
        S.names.push_back(nm + ")");
    }
    for (int i = 0; i < n; ++i) {
        DisjointSets ds(N);
        for (int t = 0; t < K; ++t) {
            if (MS.iso_class[t] != t) continue;
            auto& ix = MS.index[t];
            for (int p = 0; p < ix.count(); ++p) {
                auto a = ix.decode(p);
                a[i] = 0;
                int base = orbit_point[t][ix.encode(a)];
                for (int x = 1; x < catalog[t].domain_size; ++x) {
                    a[i] = x;
                    ds.unite(base, orbit_point[t][ix.encode(a)]);
                }
            }
        }
        S.eq.push_back(ds.partition());
    }
    S.diag.assign(n * n, PointSet(N));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int p = 0; p < N; ++p)
                if (MS.rep[p].second[i] == MS.rep[p].second[j]) S.diag[i * n + j].insert(p);
    // distinct types are separated by a formula, so every set of points is definable
    S.basis.kind = Basis::Kind::OrbitRule;
    S.basis.atoms = Partition::discrete(N);
    return MS;
}

// Canonical map from the topologization space of a catalog member.
inline const std::vector<int>& canonical_map(const ModelSpace& MS, int member) { return MS.class_map.at(member); }

namespace detail {

// Truth values of every atomic formula (relations and equalities) over v0..v(n-1).
inline std::vector<bool> atomic_diagram(const FiniteStructure& A, const Assignment& a) {
    const int n = (int)a.size();
    std::vector<bool> out;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) out.push_back(a[i] == a[j]);
    for (size_t r = 0; r < A.sig.relations.size(); ++r) {
        const int ar = A.sig.relations[r].second;
        Tuple vars(ar, 0), vals(ar);
        while (true) {
            for (int x = 0; x < ar; ++x) vals[x] = a[vars[x]];
            out.push_back(A.tables[r].contains(vals));
            int k = ar - 1;
            while (k >= 0 && ++vars[k] == n) vars[k--] = 0;
            if (k < 0) break;
        }
    }
    return out;
}

}  // namespace detail

inline constexpr int uniqueness_point_limit = 16;

// Checks the canonical map of a member: every assignment has exactly one same-type image, the map
// classifies as S, C and basis-preserving, and no other C-map respecting the atomic formulas exists.
inline Report certify_canonical_map(const ModelSpace& MS, int member) {
    Report R;
    const auto& A = MS.catalog.at(member);
    const auto& ix = MS.index[member];
    const auto& f = MS.class_map[member];
    for (int p = 0; p < ix.count(); ++p) {
        auto a = ix.decode(p);
        int matches = 0, hit = -1;
        for (int q = 0; q < MS.space.points; ++q) {
            auto& [t, b] = MS.rep[q];
            auto pins = pins_from_tuples(a, b);
            if (!pins) continue;
            if (pinned_isomorphism(A, MS.catalog[t], *pins)) {
                ++matches;
                hit = q;
            }
        }
        R.check("unique same-type image", matches == 1 && hit == f[p],
                A.name + " assignment #" + std::to_string(p) + " matches " + std::to_string(matches));
    }

    auto T = build_topologization(A, MS.dim());
    auto flags = classify_mapping(T.space, MS.space, f);
    R.check("canonical map is an S-mapping", flags.s_mapping, flags.why);
    R.check("canonical map is a C-mapping", flags.c_mapping, flags.why);
    R.check("canonical map is basis-preserving", flags.basis_preserving, flags.why);

    const std::string unique = "no other formula-respecting C-map";
    if (ix.count() > uniqueness_point_limit) {
        R.skip(unique, std::to_string(ix.count()) + " source points exceed " + std::to_string(uniqueness_point_limit));
        return R;
    }
    std::vector<std::vector<int>> options(ix.count());
    for (int p = 0; p < ix.count(); ++p) {
        auto mine = detail::atomic_diagram(A, ix.decode(p));
        for (int q = 0; q < MS.space.points; ++q)
            if (detail::atomic_diagram(MS.catalog[MS.rep[q].first], MS.rep[q].second) == mine) options[p].push_back(q);
    }
    std::vector<int> g(ix.count());
    std::uint64_t tried = 0, found = 0;
    std::string other;
    auto search = [&](auto&& self, int p) -> void {
        if (p == ix.count()) {
            ++tried;
            if (classify_mapping(T.space, MS.space, g).c_mapping) {
                ++found;
                if (g != f && other.empty()) other = "alternative map found";
            }
            return;
        }
        for (int q : options[p]) {
            g[p] = q;
            self(self, p + 1);
        }
    };
    search(search, 0);
    R.check(unique, found == 1 && other.empty(), other.empty() ? std::to_string(found) + " maps" : other);
    R.counters["candidate_maps"] += tried;
    return R;
}

// Structure read off a model point on its first-occurrence indices, via atomic formulas.
inline FiniteStructure represent_model_point(const ModelSpace& MS, Calculus& K, int b) {
    if (!K.is_model(b)) throw error("point " + MS.space.point_name(b) + " is not a model point");
    auto idx = members(K.distinct_indices(b));
    const int m = (int)idx.size();
    FiniteStructure out;
    out.name = "rep " + MS.space.point_name(b);
    out.domain_size = m;
    for (auto& [rel, ar] : MS.catalog[0].sig.relations) {
        std::set<Tuple> rows;
        Tuple t(ar, 0);
        while (true) {
            std::vector<int> vars;
            for (int x : t) vars.push_back(idx[x]);
            if (MS.interpret(Formula::atomic(rel, vars)).contains(b)) rows.insert(t);
            int k = ar - 1;
            while (k >= 0 && ++t[k] == m) t[k--] = 0;
            if (k < 0) break;
        }
        out.add_relation(rel, ar, std::move(rows));
    }
    return out;
}

// Whole-space suite: axioms, T2, domain-point images, ≍ against isomorphism, compactness smoke test,
// and the canonical map of every member.
inline Report verify_model_space(const ModelSpace& MS, Calculus& K) {
    Report R;
    const auto& S = MS.space;
    R.merge(check_space_axioms(S));
    R.check("T2", is_t2(S));

    for (size_t s = 0; s < MS.catalog.size(); ++s) {
        const auto& A = MS.catalog[s];
        const auto& ix = MS.index[s];
        std::set<int> img;
        for (int p = 0; p < ix.count(); ++p) {
            auto a = ix.decode(p);
            if ((int)std::set<int>(a.begin(), a.end()).size() == A.domain_size) img.insert(MS.class_map[s][p]);
        }
        const int first = *img.begin();
        for (int q : img) {
            auto fl = K.model_flags(q);
            R.check("domain points map to big model points", fl.model && fl.big, S.point_name(q));
            R.check("domain-point image is one ≍-class", K.equivalent(first, q), S.point_name(q));
            auto rep = represent_model_point(MS, K, q);
            R.check("represented structure is isomorphic to its member", pinned_isomorphism(rep, A).has_value(),
                    S.point_name(q));
        }
        for (int q = 0; q < S.points; ++q)
            if (!img.contains(q) && K.is_model(q))
                R.check("domain-point image is one ≍-class", !K.equivalent(first, q), S.point_name(q) + " also ≍");
        R.merge(certify_canonical_map(MS, (int)s), A.name + ": ");
    }

    std::vector<int> models;
    for (int p = 0; p < S.points; ++p)
        if (K.is_model(p)) models.push_back(p);
    for (int a : models)
        for (int b : models) {
            bool iso = pinned_isomorphism(MS.structure_of(a), MS.structure_of(b)).has_value();
            R.check("≍ ⇔ isomorphism on model points", K.equivalent(a, b) == iso,
                    S.point_name(a) + " " + S.point_name(b));
        }
    R.counters["model_points"] = models.size();

    // the generating sets around a point have the finite intersection property
    auto gens = generating_sets(S);
    for (int p = 0; p < S.points; ++p) {
        PointSet meet = S.all();
        for (auto& v : gens)
            if (v.contains(p)) meet &= v;
        R.check("compactness smoke test", !meet.empty(), S.point_name(p));
    }
    R.counters["points"] = S.points;
    return R;
}

struct EmbeddingVerdict {
    bool topological = false;  // b is a factor image of a
    bool oracle = false;       // pinned isomorphism between the represented structures
    bool agree() const { return topological == oracle; }
    std::optional<VarMap> witness;
};

// For finite structures an elementary embedding is an isomorphism; both sides are reported.
inline EmbeddingVerdict decide_embedding(const ModelSpace& MS, Calculus& K, int a, int b) {
    if (!K.is_model(a) || !K.is_model(b)) throw error("decide_embedding needs model points");
    EmbeddingVerdict v;
    for (auto& rho : K.total_maps())
        if (K.factor(rho, a, b)) {
            v.topological = true;
            v.witness = rho;
            break;
        }
    auto A = represent_model_point(MS, K, a), B = represent_model_point(MS, K, b);
    v.oracle = pinned_isomorphism(A, B).has_value();
    return v;
}

// Partial variant: b ∈ ρ(a|_dom ρ) against "x_a(i) ↦ x_b(ρ(i)) extends to an isomorphism".
inline EmbeddingVerdict decide_partial_embedding(const ModelSpace& MS, Calculus& K, int a, int b, const VarMap& rho) {
    EmbeddingVerdict v;
    v.topological = K.factor(rho, a, b);
    if (v.topological) v.witness = rho;
    auto& [sa, xa] = MS.rep[a];
    auto& [sb, xb] = MS.rep[b];
    Tuple from, to;
    for (int i : members(rho.domain())) {
        from.push_back(xa[i]);
        to.push_back(xb[rho(i)]);
    }
    auto pins = pins_from_tuples(from, to);
    v.oracle = pins && pinned_isomorphism(MS.catalog[sa], MS.catalog[sb], *pins).has_value();
    return v;
}

inline VarMap parse_pins(const std::string& text, int n) {
    VarMap rho(n);
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        auto colon = item.find(':');
        if (colon == std::string::npos) throw error("pin '" + item + "' is not of the form i:j");
        int i = -1, j = -1;
        try {
            i = std::stoi(item.substr(0, colon));
            j = std::stoi(item.substr(colon + 1));
        } catch (...) {
            throw error("pin '" + item + "' is not of the form i:j");
        }
        if (i < 0 || i >= n || j < 0 || j >= n) throw error("pin '" + item + "' outside budget");
        if (rho.defined(i)) throw error("index " + std::to_string(i) + " pinned twice");
        rho.to[i] = j;
    }
    return rho;
}

// ≍-classes of big model points.
inline int count_iso_classes(const ModelSpace& MS, Calculus& K) {
    int width = 0;
    for (auto& A : MS.catalog) width = std::max(width, A.domain_size);
    if (width > MS.dim()) throw resource_error("budget below the largest domain size");
    std::vector<int> big;
    for (int p = 0; p < MS.space.points; ++p)
        if (K.model_flags(p).big) big.push_back(p);
    std::vector<int> cls(big.size(), -1);
    int count = 0;
    for (size_t x = 0; x < big.size(); ++x) {
        if (cls[x] >= 0) continue;
        cls[x] = count;
        for (size_t y = x + 1; y < big.size(); ++y)
            if (cls[y] < 0 && K.equivalent(big[x], big[y])) cls[y] = count;
        ++count;
    }
    return count;
}

// Pairwise pinned isomorphism among catalog members.
inline int count_iso_classes_oracle(const std::vector<FiniteStructure>& catalog) {
    std::vector<int> reps;
    for (size_t s = 0; s < catalog.size(); ++s) {
        bool fresh = true;
        for (int r : reps) fresh = fresh && !pinned_isomorphism(catalog[s], catalog[r]).has_value();
        if (fresh) reps.push_back((int)s);
    }
    return (int)reps.size();
}

// --- types -------------------------------------------------------------------

struct TypeSpace {
    std::vector<std::vector<Tuple>> types;  // blocks of k-tuples
    std::set<int> params;
    int k = 0;
    int type_of(const Tuple& t) const {
        for (size_t b = 0; b < types.size(); ++b)
            if (std::find(types[b].begin(), types[b].end(), t) != types[b].end()) return (int)b;
        return -1;
    }
};

inline std::vector<Tuple> all_tuples(int m, int k) {
    std::vector<Tuple> out;
    Tuple t(k, 0);
    while (true) {
        out.push_back(t);
        int i = k - 1;
        while (i >= 0 && ++t[i] == m) t[i--] = 0;
        if (i < 0) break;
    }
    return out;
}

inline TypeSpace type_space(const FiniteStructure& A, int k, const std::set<int>& params) {
    if (k < 1) throw error("type arity must be positive");
    for (int p : params)
        if (p < 0 || p >= A.domain_size) throw error("parameter outside the domain");
    TypeSpace T;
    T.k = k;
    T.params = params;
    for (auto& t : all_tuples(A.domain_size, k)) {
        bool placed = false;
        for (auto& block : T.types)
            if (same_type_oracle(A, block.front(), t, params)) {
                block.push_back(t);
                placed = true;
                break;
            }
        if (!placed) T.types.push_back({t});
    }
    return T;
}

// Orbits of k-tuples under automorphisms fixing the parameters.
inline int type_count_by_orbits(const FiniteStructure& A, int k, const std::set<int>& params) {
    auto tuples = all_tuples(A.domain_size, k);
    std::map<Tuple, int> id;
    for (size_t i = 0; i < tuples.size(); ++i) id[tuples[i]] = (int)i;
    DisjointSets ds((int)tuples.size());
    for (auto& sigma : automorphisms(A)) {
        bool fixes = std::all_of(params.begin(), params.end(), [&](int p) { return sigma[p] == p; });
        if (!fixes) continue;
        for (size_t i = 0; i < tuples.size(); ++i) ds.unite((int)i, id[apply_perm(sigma, tuples[i])]);
    }
    return ds.partition().count();
}

struct TypeEmbedding {
    PointSet closed;                 // the complete closed set
    std::vector<int> block_of_type;  // type → block of the closed set
    std::vector<PointSet> blocks;
    Report report;
};

// The k-types of A over B as a complete closed set: coordinates of pin_coords hold the
// enumeration of B, coordinates 0..k-1 carry the type, the remaining ones are quantified away.
inline TypeEmbedding type_space_embedding(const ModelSpace& MS, Calculus& K, int member, int k,
                                          const std::vector<int>& params, const std::vector<int>& pin_coords) {
    const int n = MS.dim();
    const auto& A = MS.catalog.at(member);
    if (params.size() != pin_coords.size()) throw error("one pin coordinate per parameter");
    if (k < 1 || k + (int)params.size() > n) throw resource_error("k + |B| exceeds the budget");
    IndexSet pinned = 0;
    for (int c : pin_coords) {
        if (c < k || c >= n) throw error("pin coordinates must lie in k..n-1");
        if (has(pinned, c)) throw error("pin coordinates must be distinct");
        pinned |= bit(c);
    }
    std::set<int> B(params.begin(), params.end());
    if (B.size() != params.size()) throw error("parameters must be distinct");
    auto T = type_space(A, k, B);
    TypeEmbedding out;
    auto& R = out.report;

    auto witness = [&](const Tuple& t) {
        Assignment a(n, 0);
        for (int i = 0; i < k; ++i) a[i] = t[i];
        for (size_t r = 0; r < params.size(); ++r) a[pin_coords[r]] = params[r];
        return a;
    };
    int w0 = MS.point_of(member, witness(T.types[0].front()));
    out.closed = K.complete_closed(w0, pinned);

    std::vector<const Partition*> parts;
    for (int i = k; i < n; ++i)
        if (!has(pinned, i)) parts.push_back(&MS.space.eq[i]);
    Partition collapse = parts.empty() ? Partition::discrete(MS.space.points) : join(parts, MS.space.points);
    std::map<int, int> block_id;
    out.closed.for_each([&](int p) {
        int b = collapse.block_of[p];
        if (!block_id.contains(b)) {
            block_id[b] = (int)out.blocks.size();
            out.blocks.push_back(PointSet(MS.space.points));
        }
        out.blocks[block_id[b]].insert(p);
    });
    for (auto& blk : out.blocks) R.check("blocks lie in the closed set", blk.subset_of(out.closed));

    // types → blocks: every realisation of a type lands in the same block
    std::vector<int> hit(out.blocks.size(), 0);
    for (size_t t = 0; t < T.types.size(); ++t) {
        int blk = -1;
        for (auto& tup : T.types[t]) {
            int p = MS.point_of(member, witness(tup));
            int here = out.closed.contains(p) ? block_id.at(collapse.block_of[p]) : -2;
            R.check("type realisations lie in the closed set", here >= 0, "type " + std::to_string(t));
            if (blk == -1) blk = here;
            R.check("type → block well defined", here == blk, "type " + std::to_string(t));
        }
        out.block_of_type.push_back(blk);
        if (blk >= 0) ++hit[blk];
    }
    for (size_t b = 0; b < hit.size(); ++b)
        R.check("type → block bijective", hit[b] == 1, "block " + std::to_string(b) + " hit " + std::to_string(hit[b]));

    // each point of the closed set is realised in A with the parameters at the pinned coordinates
    const auto& ix = MS.index[member];
    out.closed.for_each([&](int p) {
        bool found = false;
        for (int q = 0; q < ix.count() && !found; ++q) {
            if (MS.class_map[member][q] != p) continue;
            auto a = ix.decode(q);
            bool ok = true;
            for (size_t r = 0; r < params.size(); ++r) ok = ok && a[pin_coords[r]] == params[r];
            found = ok;
        }
        R.check("closed-set points realised over B", found, MS.space.point_name(p));
    });

    // clopen traces: complete closed sets over the type and pin coordinates, matched both ways
    IndexSet visible = pinned | all_indices(k);
    auto& P = K.complete_partition(visible);
    for (int c = 0; c < P.count(); ++c) {
        PointSet v = P.block_set(c);
        if (!v.intersects(out.closed)) continue;
        for (size_t t = 0; t < T.types.size(); ++t) {
            int blk = out.block_of_type[t];
            if (blk < 0) continue;
            bool type_side = v.contains(MS.point_of(member, witness(T.types[t].front())));
            bool block_inside = out.blocks[blk].subset_of(v), block_meets = out.blocks[blk].intersects(v);
            R.check("clopen trace preserved (types → blocks)", !type_side || block_inside,
                    "type " + std::to_string(t) + " trace " + MS.space.set_name(v));
            R.check("clopen trace preserved (blocks → types)", !block_meets || type_side,
                    "block " + std::to_string(blk) + " trace " + MS.space.set_name(v));
        }
    }
    R.counters["types"] = T.types.size();
    R.counters["blocks"] = out.blocks.size();
    return out;
}

}  // namespace cyl
