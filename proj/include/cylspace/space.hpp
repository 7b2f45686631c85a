#pragma once

#include "error.hpp"
#include "pointset.hpp"
#include "report.hpp"
#include "structure.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace cyl {

struct Basis {
    enum class Kind { Explicit, OrbitRule };
    Kind kind = Kind::Explicit;
    std::vector<PointSet> sets;  // Explicit: the whole family
    Partition atoms;             // OrbitRule: open sets are the unions of atoms
    std::shared_ptr<const FiniteStructure> source;
};

// Points as classes of n-tuples over a value set: tuple code (coordinate 0 most significant) → point.
struct Presentation {
    int values = 0;
    std::vector<int> point_of_code;
};

struct CylSpace {
    std::string name;
    int points = 0;
    int dim = 0;
    std::vector<Partition> eq;   // ~i
    std::vector<PointSet> diag;  // dim*dim, D_ij at i*dim+j
    Basis basis;
    std::vector<Tuple> labels;   // assignment behind each point, when there is one
    std::vector<std::string> names;  // overrides labels in printing
    std::shared_ptr<const Presentation> presentation;  // set when points are known tuple classes

    const PointSet& D(int i, int j) const { return diag[i * dim + j]; }
    PointSet all() const { return PointSet::full(points); }
    PointSet none() const { return PointSet(points); }
    bool is_explicit() const { return basis.kind == Basis::Kind::Explicit; }

    std::string point_name(int p) const {
        if (p < (int)names.size()) return names[p];
        if (p < (int)labels.size()) {
            std::string s = "(";
            for (size_t i = 0; i < labels[p].size(); ++i) s += (i ? "," : "") + std::to_string(labels[p][i]);
            return s + ")";
        }
        return "#" + std::to_string(p);
    }
    std::string set_name(const PointSet& u) const {
        std::string s = "{";
        bool first = true;
        u.for_each([&](int p) {
            s += (first ? "" : ",") + point_name(p);
            first = false;
        });
        return s + "}";
    }
};

inline void check_index(const CylSpace& S, int i) {
    if (i < 0 || i >= S.dim)
        throw error("index " + std::to_string(i) + " out of range for dimension " + std::to_string(S.dim));
}

// --- saturation and substitution -----------------------------------------

inline PointSet saturate(const CylSpace& S, const PointSet& u, int i) {
    check_index(S, i);
    const auto& P = S.eq[i];
    std::vector<char> hit(P.count(), 0);
    u.for_each([&](int p) { hit[P.block_of[p]] = 1; });
    PointSet out(S.points);
    for (int b = 0; b < P.count(); ++b)
        if (hit[b])
            for (int p : P.blocks[b]) out.insert(p);
    return out;
}

inline bool is_saturated(const CylSpace& S, const PointSet& u, int i) { return saturate(S, u, i) == u; }

inline IndexSet dimension_set(const CylSpace& S, const PointSet& u) {
    IndexSet d = 0;
    for (int i = 0; i < S.dim; ++i)
        if (!is_saturated(S, u, i)) d |= bit(i);
    return d;
}

// u(i/j) = [u ∩ D_ij]_j; on assignment spaces a ∈ u(i/j) iff a[j := a(i)] ∈ u.
inline PointSet subst_set(const CylSpace& S, const PointSet& u, int i, int j) {
    check_index(S, i);
    check_index(S, j);
    if (i == j) return u;
    return saturate(S, u & S.D(i, j), j);
}

// Written substitution (src/dst): coordinate dst receives coordinate src.
struct Step {
    int src, dst;
    bool operator==(const Step&) const = default;
};
using Schedule = std::vector<Step>;

// u(s1)(s2)...(sm): applied left to right at the set level, so sm acts first on a point.
inline PointSet apply_schedule(const CylSpace& S, PointSet u, const Schedule& sched) {
    for (auto [s, d] : sched) u = subst_set(S, u, s, d);
    return u;
}

inline std::string format_schedule(const Schedule& sched) {
    std::string s;
    for (auto [a, b] : sched) s += "(" + std::to_string(a) + "/" + std::to_string(b) + ")";
    return s.empty() ? "()" : s;
}

// --- index maps ----------------------------------------------------------

struct VarMap {
    std::vector<int> to;  // -1 where undefined

    VarMap() = default;
    explicit VarMap(int n) : to(n, -1) {}
    static VarMap identity(int n) {
        VarMap r(n);
        for (int i = 0; i < n; ++i) r.to[i] = i;
        return r;
    }
    static VarMap total(std::vector<int> v) {
        VarMap r;
        r.to = std::move(v);
        return r;
    }

    int size() const { return (int)to.size(); }
    bool defined(int i) const { return i >= 0 && i < size() && to[i] >= 0; }
    int operator()(int i) const { return to[i]; }

    IndexSet domain() const {
        IndexSet d = 0;
        for (int i = 0; i < size(); ++i)
            if (to[i] >= 0) d |= bit(i);
        return d;
    }
    IndexSet image(IndexSet s) const {
        IndexSet r = 0;
        for (int i : members(s))
            if (defined(i)) r |= bit(to[i]);
        return r;
    }
    IndexSet range() const { return image(domain()); }
    bool is_total() const { return domain() == all_indices(size()); }
    bool injective() const { return popcount(range()) == popcount(domain()); }
    bool surjective() const { return range() == all_indices(size()); }
    VarMap restrict_to(IndexSet s) const {
        VarMap r(size());
        for (int i : members(s & domain())) r.to[i] = to[i];
        return r;
    }
    bool operator==(const VarMap&) const = default;

    std::string str() const {
        if (is_total()) {
            std::string s = "(";
            for (int i = 0; i < size(); ++i) s += (i ? "," : "") + std::to_string(to[i]);
            return s + ")";
        }
        std::string s = "{";
        bool first = true;
        for (int i = 0; i < size(); ++i)
            if (to[i] >= 0) {
                s += (first ? "" : ",") + std::to_string(i) + ":" + std::to_string(to[i]);
                first = false;
            }
        return s + "}";
    }

    // All total maps on {0..n-1}, lexicographic by value tuple.
    static std::vector<VarMap> all_total(int n, int codomain = -1) {
        if (codomain < 0) codomain = n;
        std::vector<VarMap> out;
        std::vector<int> v(n, 0);
        while (true) {
            out.push_back(total(v));
            int k = n - 1;
            while (k >= 0 && ++v[k] == codomain) v[k--] = 0;
            if (k < 0) break;
        }
        return out;
    }
};

// outer ∘ inner, defined where inner is defined and lands in outer's domain.
inline VarMap compose(const VarMap& outer, const VarMap& inner) {
    VarMap r(inner.size());
    for (int i = 0; i < inner.size(); ++i)
        if (inner.defined(i) && outer.defined(inner(i))) r.to[i] = outer(inner(i));
    return r;
}

// --- permutation of sets -------------------------------------------------

// ρu = u(k1/j1)...(kn/jn)(ρj1/k1)...(ρjn/kn).
inline Schedule literal_schedule(const std::vector<int>& js, const std::vector<int>& ks, const std::vector<int>& is) {
    Schedule s;
    for (size_t r = 0; r < js.size(); ++r) s.push_back({ks[r], js[r]});
    for (size_t r = 0; r < js.size(); ++r) s.push_back({is[r], ks[r]});
    return s;
}

inline int required_budget(IndexSet delta, const VarMap& rho) {
    return popcount(delta | rho.image(delta)) + popcount(delta);
}

// Spare indices for fresh variables: outside Δ ∪ ρΔ, smallest first.
inline std::vector<int> spare_indices(int n, IndexSet used) {
    std::vector<int> out;
    for (int k = 0; k < n; ++k)
        if (!has(used, k)) out.push_back(k);
    return out;
}

inline void check_domain(IndexSet delta, const VarMap& rho) {
    if ((delta & ~rho.domain()) != 0)
        throw error("permutation: Δ(u) = " + format_indices(delta) + " not inside dom(ρ) = " +
                    format_indices(rho.domain()));
}

// Literal permutation with the deterministic fresh-index policy.
inline PointSet permute_set(const CylSpace& S, const PointSet& u, const VarMap& rho) {
    IndexSet delta = dimension_set(S, u);
    check_domain(delta, rho);
    auto js = members(delta);
    auto spare = spare_indices(S.dim, delta | rho.image(delta));
    if (spare.size() < js.size())
        throw resource_error("fresh-index exhaustion: permuting a set with Δ = " + format_indices(delta) + " by " +
                             rho.str() + " needs budget " + std::to_string(required_budget(delta, rho)) +
                             ", have " + std::to_string(S.dim));
    std::vector<int> ks(spare.begin(), spare.begin() + js.size()), is;
    for (int j : js) is.push_back(rho(j));
    return apply_schedule(S, u, literal_schedule(js, ks, is));
}

inline bool literal_feasible(int n, IndexSet delta, const VarMap& rho) {
    return (delta & ~rho.domain()) == 0 && required_budget(delta, rho) <= n;
}

// Shortest copy program that leaves coordinate j holding the old value of ρ(j) for every j in targets.
// Returned in written order. Breadth-first over coordinate contents, so n^n states.
inline std::optional<Schedule> compact_schedule(int n, IndexSet targets, const VarMap& rho) {
    check_domain(targets, rho);
    if (n > 6) throw resource_error("compact permutation search limited to dimension 6");
    int states = 1;
    for (int i = 0; i < n; ++i) states *= n;
    auto encode = [&](const std::vector<int>& c) {
        int x = 0;
        for (int i = n - 1; i >= 0; --i) x = x * n + c[i];
        return x;
    };
    auto decode = [&](int x) {
        std::vector<int> c(n);
        for (int i = 0; i < n; ++i, x /= n) c[i] = x % n;
        return c;
    };
    auto goal = [&](const std::vector<int>& c) {
        for (int j : members(targets))
            if (c[j] != rho(j)) return false;
        return true;
    };
    std::vector<int> start(n);
    for (int i = 0; i < n; ++i) start[i] = i;
    std::vector<int> prev(states, -2), move(states, -1);
    std::vector<int> queue{encode(start)};
    prev[queue[0]] = -1;
    for (size_t h = 0; h < queue.size(); ++h) {
        auto c = decode(queue[h]);
        if (goal(c)) {
            Schedule exec;
            for (int x = queue[h]; prev[x] >= 0; x = prev[x]) exec.push_back({move[x] / n, move[x] % n});
            // exec is last-executed first, which is exactly the written order
            return exec;
        }
        for (int s = 0; s < n; ++s)
            for (int d = 0; d < n; ++d) {
                if (s == d || c[s] == c[d]) continue;
                auto next = c;
                next[d] = c[s];
                int x = encode(next);
                if (prev[x] != -2) continue;
                prev[x] = queue[h];
                move[x] = s * n + d;
                queue.push_back(x);
            }
    }
    return std::nullopt;
}

inline PointSet permute_set_compact(const CylSpace& S, const PointSet& u, const VarMap& rho) {
    IndexSet delta = dimension_set(S, u);
    auto sched = compact_schedule(S.dim, delta, rho);
    if (!sched)
        throw resource_error("no copy program realises " + rho.str() + " on Δ = " + format_indices(delta) +
                             " within dimension " + std::to_string(S.dim));
    return apply_schedule(S, u, *sched);
}

// Literal formula when the budget allows, otherwise the compact program.
inline PointSet permute_any(const CylSpace& S, const PointSet& u, const VarMap& rho) {
    IndexSet delta = dimension_set(S, u);
    if (literal_feasible(S.dim, delta, rho)) return permute_set(S, u, rho);
    return permute_set_compact(S, u, rho);
}

// --- intrinsic coordinates -----------------------------------------------

// Recovers element values from the space alone: coordinate i of a point is its class under the
// joint relation of all ~j with j != i; diagonals identify the classes across coordinates.
struct Coordinates {
    int values = 0;
    std::vector<Tuple> tuple;      // per point
    std::map<Tuple, int> point;    // inverse
};

inline std::optional<Coordinates> coordinatize(const CylSpace& S) {
    const int n = S.dim, N = S.points;
    if (n == 0 || N == 0) return std::nullopt;
    std::vector<Partition> value(n);
    for (int i = 0; i < n; ++i) {
        std::vector<const Partition*> others;
        for (int j = 0; j < n; ++j)
            if (j != i) others.push_back(&S.eq[j]);
        value[i] = others.empty() ? Partition::discrete(N) : join(others, N);
    }
    std::vector<int> offset(n + 1, 0);
    for (int i = 0; i < n; ++i) offset[i + 1] = offset[i] + value[i].count();
    DisjointSets ds(offset[n]);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            S.D(i, j).for_each([&](int p) {
                ds.unite(offset[i] + value[i].block_of[p], offset[j] + value[j].block_of[p]);
            });
    // element ids follow coordinate-0 classes
    std::map<int, int> elem;
    for (int b = 0; b < value[0].count(); ++b) {
        int root = ds.find(offset[0] + b);
        if (elem.contains(root)) return std::nullopt;
        elem[root] = b;
    }
    for (int i = 1; i < n; ++i) {
        std::set<int> seen;
        for (int b = 0; b < value[i].count(); ++b) {
            auto it = elem.find(ds.find(offset[i] + b));
            if (it == elem.end() || !seen.insert(it->second).second) return std::nullopt;
        }
        if ((int)seen.size() != value[0].count()) return std::nullopt;
    }
    Coordinates C;
    C.values = value[0].count();
    C.tuple.resize(N);
    for (int p = 0; p < N; ++p) {
        Tuple t(n);
        for (int i = 0; i < n; ++i) t[i] = elem[ds.find(offset[i] + value[i].block_of[p])];
        if (!C.point.emplace(t, p).second) return std::nullopt;
        C.tuple[p] = std::move(t);
    }
    long long full = 1;
    for (int i = 0; i < n; ++i) full *= C.values;
    if ((long long)C.point.size() != full) return std::nullopt;
    return C;
}

// Pullback along recovered coordinates: a ∈ ρu iff the point reading a(ρ(j)) at each j ∈ Δ(u) lies in u.
inline PointSet permute_by_coordinates(const CylSpace& S, const Coordinates& C, const PointSet& u, const VarMap& rho) {
    IndexSet delta = dimension_set(S, u);
    check_domain(delta, rho);
    PointSet out(S.points);
    for (int p = 0; p < S.points; ++p) {
        Tuple t = C.tuple[p];
        for (int j : members(delta)) t[j] = C.tuple[p][rho(j)];
        if (u.contains(C.point.at(t))) out.insert(p);
    }
    return out;
}

// Pullback through a presentation; every tuple of a point has to agree on membership.
inline PointSet permute_by_presentation(const CylSpace& S, const Presentation& P, const PointSet& u, const VarMap& rho) {
    IndexSet delta = dimension_set(S, u);
    check_domain(delta, rho);
    const int n = S.dim, codes = (int)P.point_of_code.size();
    std::vector<int> verdict(S.points, -1);
    Tuple t(n);
    for (int code = 0; code < codes; ++code) {
        for (int i = n - 1, c = code; i >= 0; --i, c /= P.values) t[i] = c % P.values;
        int s = 0;
        for (int i = 0; i < n; ++i) s = s * P.values + (has(delta, i) ? t[rho(i)] : t[i]);
        int in = u.contains(P.point_of_code[s]);
        int& v = verdict[P.point_of_code[code]];
        if (v >= 0 && v != in)
            throw error("permutation by " + rho.str() + " is not constant on the tuples of " +
                        S.point_name(P.point_of_code[code]));
        v = in;
    }
    PointSet out(S.points);
    for (int p = 0; p < S.points; ++p)
        if (verdict[p] == 1) out.insert(p);
    return out;
}

// --- topology ------------------------------------------------------------

// Minimal nonempty Boolean combinations of the basis: points grouped by basis membership.
inline Partition basis_atoms(const CylSpace& S) {
    if (!S.is_explicit()) return S.basis.atoms;
    std::map<std::vector<bool>, int> sig;
    std::vector<int> lab(S.points);
    for (int p = 0; p < S.points; ++p) {
        std::vector<bool> key;
        key.reserve(S.basis.sets.size());
        for (auto& v : S.basis.sets) key.push_back(v.contains(p));
        lab[p] = sig.emplace(key, (int)sig.size()).first->second;
    }
    return Partition::from_labels(lab);
}

// Sets spanning the topology for membership tests: the explicit list, or the orbit atoms.
inline std::vector<PointSet> generating_sets(const CylSpace& S) {
    if (S.is_explicit()) return S.basis.sets;
    std::vector<PointSet> out;
    for (int b = 0; b < S.basis.atoms.count(); ++b) out.push_back(S.basis.atoms.block_set(b));
    return out;
}

inline PointSet interior(const CylSpace& S, const PointSet& u) {
    PointSet out(S.points);
    for (auto& v : generating_sets(S))
        if (v.subset_of(u)) out |= v;
    return out;
}
inline bool is_open(const CylSpace& S, const PointSet& u) { return interior(S, u) == u; }
inline bool is_closed(const CylSpace& S, const PointSet& u) { return is_open(S, ~u); }
inline PointSet closure(const CylSpace& S, const PointSet& u) { return ~interior(S, ~u); }

// Smallest basis set containing u.
inline PointSet open_hull(const CylSpace& S, const PointSet& u) {
    if (!S.is_explicit()) {
        PointSet out(S.points);
        for (auto& b : S.basis.atoms.blocks)
            if (std::any_of(b.begin(), b.end(), [&](int p) { return u.contains(p); }))
                for (int p : b) out.insert(p);
        return out;
    }
    PointSet out = S.all();
    for (auto& v : S.basis.sets)
        if (u.subset_of(v)) out &= v;
    return out;
}

inline bool in_basis(const CylSpace& S, const PointSet& u) {
    if (!S.is_explicit()) return open_hull(S, u) == u;
    return std::find(S.basis.sets.begin(), S.basis.sets.end(), u) != S.basis.sets.end();
}

// Every basis set meeting Y meets X ∩ Y.
inline bool is_dense_in(const CylSpace& S, const PointSet& X, const PointSet& Y) {
    PointSet XY = X & Y;
    for (auto& v : generating_sets(S))
        if (v.intersects(Y) && !v.intersects(XY)) return false;
    return true;
}

inline bool is_t2(const CylSpace& S) { return basis_atoms(S).count() == S.points; }

// Permutation of an arbitrary set through its smallest basis superset.
inline PointSet permute_closed(const CylSpace& S, const PointSet& u, const VarMap& rho) {
    return permute_any(S, open_hull(S, u), rho);
}

// Basis members to quantify over: the list, or unions of orbit atoms (all of them when few, else sampled).
inline std::vector<PointSet> invariant_sets(const CylSpace& S, std::uint64_t seed = 0, int max_atoms = 12,
                                            int samples = 256) {
    if (S.is_explicit()) return S.basis.sets;
    const auto& A = S.basis.atoms;
    std::vector<PointSet> out;
    if (A.count() <= max_atoms) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << A.count()); ++mask) {
            PointSet u(S.points);
            for (int b = 0; b < A.count(); ++b)
                if (mask >> b & 1)
                    for (int p : A.blocks[b]) u.insert(p);
            out.push_back(std::move(u));
        }
        return out;
    }
    std::set<PointSet> seen;
    auto add = [&](PointSet u) {
        if (seen.insert(u).second) out.push_back(std::move(u));
    };
    add(S.none());
    add(S.all());
    for (int b = 0; b < A.count(); ++b) {
        add(A.block_set(b));
        add(~A.block_set(b));
    }
    for (int i = 0; i < S.dim; ++i)
        for (int j = 0; j < S.dim; ++j) add(S.D(i, j));
    std::mt19937_64 rng(seed);
    for (int s = 0; s < samples; ++s) {
        PointSet u(S.points);
        for (int b = 0; b < A.count(); ++b)
            if (rng() & 1)
                for (int p : A.blocks[b]) u.insert(p);
        add(std::move(u));
    }
    return out;
}

// --- axioms --------------------------------------------------------------

inline Report check_space_axioms(const CylSpace& S) {
    Report R;
    const int n = S.dim, N = S.points;
    auto single = [&](int p) { return PointSet::of(N, {p}); };

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int a = 0; a < N; ++a) {
                auto ij = saturate(S, saturate(S, single(a), i), j);
                auto ji = saturate(S, saturate(S, single(a), j), i);
                R.check("commutativity of ~i", ij == ji,
                        "a=" + S.point_name(a) + " i=" + std::to_string(i) + " j=" + std::to_string(j));
            }

    if (S.is_explicit()) {
        std::set<PointSet> B(S.basis.sets.begin(), S.basis.sets.end());
        auto in = [&](const PointSet& u) { return B.contains(u); };
        R.check("basis closure", in(S.none()), "empty set missing");
        R.check("basis closure", in(S.all()), "full set missing");
        for (auto& u : S.basis.sets) {
            R.check("basis closure", in(~u), "complement of " + S.set_name(u));
            for (int i = 0; i < n; ++i)
                R.check("basis closure", in(saturate(S, u, i)), "[" + S.set_name(u) + "]_" + std::to_string(i));
        }
        for (size_t x = 0; x < S.basis.sets.size(); ++x)
            for (size_t y = x + 1; y < S.basis.sets.size(); ++y) {
                auto& u = S.basis.sets[x];
                auto& v = S.basis.sets[y];
                R.check("basis closure", in(u | v), "union of " + S.set_name(u) + " and " + S.set_name(v));
                R.check("basis closure", in(u & v), "intersection of " + S.set_name(u) + " and " + S.set_name(v));
            }
    } else {
        const auto& A = S.basis.atoms;
        for (int b = 0; b < A.count(); ++b)
            for (int i = 0; i < n; ++i) {
                auto s = saturate(S, A.block_set(b), i);
                R.check("basis closure (orbit atoms)", open_hull(S, s) == s,
                        "[atom " + std::to_string(b) + "]_" + std::to_string(i) + " is not a union of atoms");
            }
    }

    for (int i = 0; i < n; ++i) {
        R.check("D_ii = S", S.D(i, i) == S.all(), "i=" + std::to_string(i));
        for (int j = 0; j < n; ++j) {
            std::string ij = "i=" + std::to_string(i) + " j=" + std::to_string(j);
            R.check("D_ij = D_ji", S.D(i, j) == S.D(j, i), ij);
            R.check("D_ij clopen", in_basis(S, S.D(i, j)), ij);
            for (int k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                std::string ijk = ij + " k=" + std::to_string(k);
                R.check("D_ij is ~k-saturated", is_saturated(S, S.D(i, j), k), ijk);
                R.check("D_ij ∩ D_jk ⊆ D_ik", (S.D(i, j) & S.D(j, k)).subset_of(S.D(i, k)), ijk);
            }
            for (int k = 0; k < n; ++k) {
                if (j == i || j == k) continue;
                R.check("D_ik = [D_ij ∩ D_jk]_j", saturate(S, S.D(i, j) & S.D(j, k), j) == S.D(i, k),
                        ij + " k=" + std::to_string(k));
            }
            if (i == j) continue;
            for (int a = 0; a < N; ++a) {
                auto ci = saturate(S, single(a), i) & S.D(i, j);
                auto cj = saturate(S, single(a), j) & S.D(i, j);
                R.check("diagonal uniqueness |[a]_i ∩ D_ij| = 1", ci.size() == 1 && cj.size() == 1,
                        "a=" + S.point_name(a) + " " + ij + " sizes " + std::to_string(ci.size()) + "," +
                            std::to_string(cj.size()));
            }
        }
    }

    // holds for T2 spaces; orbit topologies of structures with symmetry are coarser
    if (is_t2(S)) {
        for (int i = 0; i < n; ++i)
            for (int b = 0; b < S.eq[i].count(); ++b)
                R.check("[a]_i is closed", is_closed(S, S.eq[i].block_set(b)),
                        "block " + S.set_name(S.eq[i].block_set(b)) + " of ~" + std::to_string(i));
    } else {
        R.skip("[a]_i is closed", "space is not T2");
    }
    return R;
}

// --- substitution laws ---------------------------------------------------

struct LawOptions {
    std::uint64_t seed = 0;
    int law6_samples = 50;
    int pair_cap = 256;  // beyond this many sets, law-2 intersections are sampled
};

// Configurations (j-list, i-list) for the fresh-index law, with every valid k-vector grouped by
// its equality pattern.
namespace detail {
inline std::vector<std::vector<int>> fresh_vectors(int n, const std::vector<int>& js, const std::vector<int>& is) {
    IndexSet used = 0;
    for (int j : js) used |= bit(j);
    for (int i : is) used |= bit(i);
    auto spare = spare_indices(n, used);
    std::vector<std::vector<int>> out;
    std::vector<int> k(js.size());
    auto rec = [&](auto&& self, size_t r) -> void {
        if (r == js.size()) {
            out.push_back(k);
            return;
        }
        for (int c : spare) {
            bool ok = true;
            for (size_t s = 0; s < r && ok; ++s)
                if (k[s] == c && is[s] != is[r]) ok = false;
            if (!ok) continue;
            k[r] = c;
            self(self, r + 1);
        }
    };
    rec(rec, 0);
    return out;
}
inline std::vector<int> equality_pattern(const std::vector<int>& k) {
    std::vector<int> pat;
    for (size_t r = 0; r < k.size(); ++r) {
        int first = (int)r;
        for (size_t s = 0; s < r; ++s)
            if (k[s] == k[r]) { first = (int)s; break; }
        pat.push_back(first);
    }
    return pat;
}
}  // namespace detail

inline Report verify_substitution_laws(const CylSpace& S, const LawOptions& opt = {}) {
    Report R;
    const int n = S.dim;
    auto sets = invariant_sets(S, opt.seed);
    R.counters["invariant_sets"] = sets.size();
    std::vector<IndexSet> deltas;
    for (auto& u : sets) deltas.push_back(dimension_set(S, u));
    auto idx = [](int i) { return std::to_string(i); };

    for (size_t x = 0; x < sets.size(); ++x) {
        const auto& u = sets[x];
        IndexSet du = deltas[x];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                std::string w = "u=" + S.set_name(u) + " i=" + idx(i) + " j=" + idx(j);
                if (!has(du, j)) R.check("j∉Δ(u) ⇒ u(i/j)=u", subst_set(S, u, i, j) == u, w);
                if (i != j) {
                    R.check("(−u)(i/j) = −(u(i/j))", subst_set(S, ~u, i, j) == ~subst_set(S, u, i, j), w);
                    if (!has(du, j)) {
                        R.check("(u∩D_ij)(i/j) = u", subst_set(S, u & S.D(i, j), i, j) == u, w);
                        R.check("u(j/i)(i/j) = u", subst_set(S, subst_set(S, u, j, i), i, j) == u, w);
                    }
                }
                for (int k = 0; k < n; ++k) {
                    if (has(du, k) || i == j || i == k) continue;
                    R.check("u(k/j)(i/k) = u(i/j)",
                            subst_set(S, subst_set(S, u, k, j), i, k) == subst_set(S, u, i, j), w + " k=" + idx(k));
                }
                for (int i2 = 0; i2 < n; ++i2)
                    for (int j2 = 0; j2 < n; ++j2) {
                        if (j == j2 || i == j || i == j2 || i2 == j || i2 == j2) continue;
                        auto a = subst_set(S, subst_set(S, u, i, j), i2, j2);
                        auto b = subst_set(S, subst_set(S, u, i2, j2), i, j);
                        R.check("substitutions commute", a == b,
                                w + " i2=" + idx(i2) + " j2=" + idx(j2));
                    }
            }
    }
    R.skip("(−u)(i/j) = −(u(i/j))", "not applicable: requires i≠j");
    R.skip("complement law, i=j", "not applicable: the law states i≠j");

    // intersections
    std::mt19937_64 rng(opt.seed ^ 0x9e3779b97f4a7c15ULL);
    auto law2_pair = [&](const PointSet& u, const PointSet& v) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                R.check("(u∩u′)(i/j) = u(i/j)∩u′(i/j)",
                        subst_set(S, u & v, i, j) == (subst_set(S, u, i, j) & subst_set(S, v, i, j)),
                        "u=" + S.set_name(u) + " u′=" + S.set_name(v) + " i=" + idx(i) + " j=" + idx(j));
            }
    };
    if ((int)sets.size() <= opt.pair_cap) {
        for (size_t x = 0; x < sets.size(); ++x)
            for (size_t y = x; y < sets.size(); ++y) law2_pair(sets[x], sets[y]);
    } else {
        std::uniform_int_distribution<size_t> pick(0, sets.size() - 1);
        for (int s = 0; s < opt.pair_cap * 64; ++s) law2_pair(sets[pick(rng)], sets[pick(rng)]);
    }
    if (n < 2) {
        for (auto name : {"j∉Δ(u) ⇒ u(i/j)=u", "substitutions commute", "u(k/j)(i/k) = u(i/j)",
                          "(u∩D_ij)(i/j) = u", "u(j/i)(i/j) = u",
                          "(u∩u′)(i/j) = u(i/j)∩u′(i/j)"})
            R.skip(name, "not applicable at dimension " + idx(n));
    }
    for (auto name : {"substitutions commute", "u(k/j)(i/k) = u(i/j)"})
        R.skip(name, "no index tuple meets the side conditions at dimension " + idx(n));

    // two fresh-index schedules for the same (u, j-list, i-list)
    struct Config {
        size_t u;
        std::vector<int> js, is, k1, k2;
    };
    std::vector<Config> configs;
    for (size_t x = 0; x < sets.size(); ++x) {
        // ordered j-lists of distinct indices covering Δ(u), shorter than n
        std::vector<int> js;
        auto rec_j = [&](auto&& self) -> void {
            IndexSet cover = 0;
            for (int j : js) cover |= bit(j);
            if ((deltas[x] & ~cover) == 0 && !js.empty()) {
                std::vector<int> is(js.size(), 0);
                while (true) {
                    auto ks = detail::fresh_vectors(n, js, is);
                    std::map<std::vector<int>, std::vector<std::vector<int>>> by_pattern;
                    for (auto& k : ks) by_pattern[detail::equality_pattern(k)].push_back(k);
                    for (auto& [pat, group] : by_pattern)
                        if (group.size() >= 2) configs.push_back({x, js, is, group.front(), group.back()});
                    size_t r = is.size();
                    while (r > 0 && ++is[r - 1] == n) is[--r] = 0;
                    if (r == 0) break;
                }
            }
            if ((int)js.size() + 1 >= n) return;
            for (int j = 0; j < n; ++j) {
                if (std::find(js.begin(), js.end(), j) != js.end()) continue;
                js.push_back(j);
                self(self);
                js.pop_back();
            }
        };
        rec_j(rec_j);
    }
    R.counters["law6_configurations"] = configs.size();
    if (configs.empty()) {
        R.skip("fresh-index independence", "no configuration admits two fresh-index choices at dimension " + idx(n));
    } else {
        std::uniform_int_distribution<size_t> pick(0, configs.size() - 1);
        for (int s = 0; s < opt.law6_samples; ++s) {
            auto& c = configs[pick(rng)];
            auto s1 = literal_schedule(c.js, c.k1, c.is);
            auto s2 = literal_schedule(c.js, c.k2, c.is);
            R.check("fresh-index independence",
                    apply_schedule(S, sets[c.u], s1) == apply_schedule(S, sets[c.u], s2),
                    "u=" + S.set_name(sets[c.u]) + " " + format_schedule(s1) + " vs " + format_schedule(s2));
        }
    }

    // the two permutation engines, and the coordinate pullback when coordinates exist
    auto coords = coordinatize(S);
    auto maps = n <= 4 ? VarMap::all_total(n) : std::vector<VarMap>{VarMap::identity(n)};
    for (size_t x = 0; x < sets.size(); ++x)
        for (auto& rho : maps) {
            IndexSet d = deltas[x];
            std::string w = "u=" + S.set_name(sets[x]) + " ρ=" + rho.str();
            std::optional<PointSet> lit, comp;
            if (literal_feasible(n, d, rho)) lit = permute_set(S, sets[x], rho);
            if (auto sc = compact_schedule(n, d, rho)) comp = apply_schedule(S, sets[x], *sc);
            if (lit && comp) R.check("permutation: compact program agrees with the literal formula", *lit == *comp, w);
            if (coords && comp)
                R.check("permutation: agrees with coordinate pullback",
                        *comp == permute_by_coordinates(S, *coords, sets[x], rho), w);
        }
    R.skip("permutation: compact program agrees with the literal formula", "literal formula infeasible everywhere");
    R.skip("permutation: agrees with coordinate pullback", "space has no recoverable coordinates");
    return R;
}

// --- mappings ------------------------------------------------------------

struct MappingFlags {
    bool s_mapping = false, c_mapping = false, basis_preserving = false, homeomorphism = false;
    bool continuous = false, keeps_diagonals = false, homomorphism = false;
    bool injective = false, surjective = false;
    std::string why;  // first failed clause
};

inline PointSet preimage(const std::vector<int>& f, const PointSet& v) {
    PointSet out(f.size());
    for (size_t p = 0; p < f.size(); ++p)
        if (v.contains(f[p])) out.insert((int)p);
    return out;
}

inline PointSet image(const std::vector<int>& f, const PointSet& u, int codomain) {
    PointSet out(codomain);
    u.for_each([&](int p) { out.insert(f[p]); });
    return out;
}

inline MappingFlags classify_mapping(const CylSpace& C, const CylSpace& T, const std::vector<int>& f) {
    if (C.dim < T.dim) throw error("classify_mapping: source dimension below target dimension");
    if ((int)f.size() != C.points) throw error("classify_mapping: map is not total on the source");
    for (int y : f)
        if (y < 0 || y >= T.points) throw error("classify_mapping: image outside target");
    MappingFlags F;
    auto note = [&](bool ok, const std::string& what) {
        if (!ok && F.why.empty()) F.why = what;
        return ok;
    };
    const int m = T.dim;
    auto targets = generating_sets(T);

    std::vector<char> hit(T.points, 0);
    for (int y : f) hit[y] = 1;
    F.surjective = std::all_of(hit.begin(), hit.end(), [](char c) { return c; });
    F.injective = std::set<int>(f.begin(), f.end()).size() == f.size();

    F.continuous = true;
    for (auto& v : targets)
        if (!is_open(C, preimage(f, v))) {
            F.continuous = note(false, "preimage of " + T.set_name(v) + " is not open");
            break;
        }
    F.keeps_diagonals = true;
    for (int i = 0; i < m && F.keeps_diagonals; ++i)
        for (int j = 0; j < m && F.keeps_diagonals; ++j)
            if (!(preimage(f, T.D(i, j)) == C.D(i, j)))
                F.keeps_diagonals = note(false, "f⁻¹[D_" + std::to_string(i) + std::to_string(j) + "] ≠ D_" +
                                                    std::to_string(i) + std::to_string(j));
    F.homomorphism = true;
    for (int i = 0; i < m && F.homomorphism; ++i)
        for (auto& b : C.eq[i].blocks)
            if (std::any_of(b.begin(), b.end(),
                            [&](int p) { return T.eq[i].block_of[f[p]] != T.eq[i].block_of[f[b[0]]]; })) {
                F.homomorphism = note(false, "~" + std::to_string(i) + " not preserved at " + C.point_name(b[0]));
                break;
            }
    F.s_mapping = F.continuous && F.keeps_diagonals && F.homomorphism;

    bool crit = true;
    for (auto& v : targets) {
        auto pre = preimage(f, v);
        for (int i = 0; i < m && crit; ++i)
            if (!(saturate(C, pre, i) == preimage(f, saturate(T, v, i))))
                crit = note(false, "[f⁻¹" + T.set_name(v) + "]_" + std::to_string(i) + " ≠ f⁻¹[[v]_i]");
        for (int i = m; i < C.dim && crit; ++i)
            if (!is_saturated(C, pre, i))
                crit = note(false, "f⁻¹" + T.set_name(v) + " not ~" + std::to_string(i) + "-saturated");
        if (!crit) break;
    }
    F.c_mapping = F.s_mapping && crit;

    // sets with Δ(u) ⊆ dim T: explicit members, or blocks of orbit atoms joined with ~i for i ≥ dim T
    std::vector<PointSet> low;
    if (C.is_explicit()) {
        IndexSet lowdims = all_indices(m);
        for (auto& u : C.basis.sets)
            if ((dimension_set(C, u) & ~lowdims) == 0) low.push_back(u);
    } else {
        std::vector<const Partition*> parts{&C.basis.atoms};
        for (int i = m; i < C.dim; ++i) parts.push_back(&C.eq[i]);
        auto P = join(parts, C.points);
        for (int b = 0; b < P.count(); ++b) low.push_back(P.block_set(b));
    }
    F.basis_preserving = true;
    for (auto& u : low) {
        PointSet W(T.points);
        for (auto& v : targets)
            if (preimage(f, v).subset_of(u)) W |= v;
        if (!(preimage(f, W) == u)) {
            F.basis_preserving = note(false, C.set_name(u) + " is not a preimage of an open set");
            break;
        }
    }
    F.homeomorphism = F.injective && F.surjective && F.basis_preserving && F.s_mapping && C.dim == T.dim;
    return F;
}

}  // namespace cyl
