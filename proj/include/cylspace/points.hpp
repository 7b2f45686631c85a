#pragma once

#include "space.hpp"

#include <functional>
#include <map>
#include <optional>
#include <random>

namespace cyl {

struct FactorWitness {
    VarMap rho;
    int source = -1, target = -1;
    bool equivalence = false;
};

struct ModelFlags {
    bool model = false, big = false;
};

// Point-level machinery over one space, with the per-index-set partitions and copy programs cached.
class Calculus {
public:
    explicit Calculus(const CylSpace& S) : S_(S), cc_(std::size_t{1} << S.dim) {
        if (S.dim > 16) throw resource_error("point calculus limited to dimension 16");
    }

    const CylSpace& space() const { return S_; }

    // Blocks are the complete closed sets of dimension s.
    const Partition& complete_partition(IndexSet s) {
        auto& slot = cc_[s];
        if (slot) return *slot;
        if (!S_.is_explicit()) {
            std::vector<const Partition*> parts{&S_.basis.atoms};
            for (int i = 0; i < S_.dim; ++i)
                if (!has(s, i)) parts.push_back(&S_.eq[i]);
            slot = join(parts, S_.points);
        } else {
            std::vector<const PointSet*> low;
            for (auto& v : S_.basis.sets)
                if ((dimension_set(S_, v) & ~s) == 0) low.push_back(&v);
            std::map<std::vector<bool>, int> sig;
            std::vector<int> lab(S_.points);
            for (int p = 0; p < S_.points; ++p) {
                std::vector<bool> key;
                for (auto* v : low) key.push_back(v->contains(p));
                lab[p] = sig.emplace(key, (int)sig.size()).first->second;
            }
            slot = Partition::from_labels(lab);
        }
        return *slot;
    }

    PointSet complete_closed(int a, IndexSet s) {
        auto& P = complete_partition(s);
        return P.block_set(P.block_of[a]);
    }

    // Smallest closed superset of u whose dimension set lies in s.
    PointSet hull(const PointSet& u, IndexSet s) {
        auto& P = complete_partition(s);
        std::vector<char> hit(P.count(), 0);
        u.for_each([&](int p) { hit[P.block_of[p]] = 1; });
        PointSet out(S_.points);
        for (int b = 0; b < P.count(); ++b)
            if (hit[b])
                for (int p : P.blocks[b]) out.insert(p);
        return out;
    }

    // ρu for closed u: the permutation of its closed hull over dom(ρ), which equals the
    // intersection of ρv over basis sets v ⊇ u since each ρ commutes with finite intersections.
    PointSet permute_closed(const PointSet& u, const VarMap& rho) {
        PointSet w = hull(u, rho.domain());
        return permute_exact(w, dimension_set(S_, w), rho);
    }

    // ρ{a} for total or partial ρ: the permutation of a|_dom(ρ).
    PointSet permute_points(int a, const VarMap& rho) {
        auto key = std::make_pair(rho.to, a);
        auto it = point_cache_.find(key);
        if (it != point_cache_.end()) return it->second;
        auto r = permute_closed(PointSet::of(S_.points, {a}), rho);
        point_cache_.emplace(std::move(key), r);
        return r;
    }

    bool factor(const VarMap& rho, int a, int b) { return permute_points(a, rho).contains(b); }

    // Side condition for ≍: every index outside ran(ρ) is diagonal-linked at b to one inside.
    bool covers_range(const VarMap& rho, int b) const {
        IndexSet ran = rho.range();
        for (int j = 0; j < S_.dim; ++j) {
            if (has(ran, j)) continue;
            bool ok = false;
            for (int i : members(ran)) ok = ok || S_.D(i, j).contains(b);
            if (!ok) return false;
        }
        return true;
    }

    const std::vector<VarMap>& total_maps() {
        if (totals_.empty()) {
            if (S_.dim > 4) throw resource_error("factor search limited to dimension 4");
            totals_ = VarMap::all_total(S_.dim);
        }
        return totals_;
    }

    std::optional<FactorWitness> exists_factor(int a, int b, bool require_equiv) {
        for (auto& rho : total_maps()) {
            if (!factor(rho, a, b)) continue;
            bool eq = covers_range(rho, b);
            if (require_equiv && !eq) continue;
            return FactorWitness{rho, a, b, eq};
        }
        if (require_equiv) return std::nullopt;
        // partial maps, larger domains first
        auto partial = partial_maps();
        for (auto& rho : partial)
            if (factor(rho, a, b)) return FactorWitness{rho, a, b, false};
        return std::nullopt;
    }

    bool equivalent(int a, int b) { return exists_factor(a, b, true).has_value(); }

    int permute_point(const VarMap& rho, int a) {
        if (!is_t2(S_)) throw error("permute_point needs a T2 space");
        if (!rho.is_total() || !rho.surjective()) throw error("permute_point needs a surjective total map");
        auto r = permute_points(a, rho);
        if (r.empty())
            throw error("ρ{a} is empty for ρ=" + rho.str() + ", a=" + S_.point_name(a) +
                        ": a is not on the diagonals of the fibers of ρ");
        return r.first();
    }

    // b ∈ [u]_i ⇒ b ∈ u(j/i) for some j, over basis atoms u (enough by monotonicity of u ↦ u(j/i)).
    bool is_model(int b) {
        ensure_models();
        return model_[b];
    }

    ModelFlags model_flags(int b) {
        ensure_models();
        ModelFlags f{model_[b] != 0, false};
        if (f.model) f.big = is_big(b);
        return f;
    }

    // Indices not diagonal-linked to an earlier one at b.
    IndexSet distinct_indices(int b) const {
        IndexSet out = 0;
        for (int i = 0; i < S_.dim; ++i) {
            bool fresh = true;
            for (int j = 0; j < i && fresh; ++j) fresh = !S_.D(i, j).contains(b);
            if (fresh) out |= bit(i);
        }
        return out;
    }

    // Width a big model point must reach: the most distinct indices any model point has.
    int big_width() {
        ensure_models();
        if (big_width_ < 0) {
            big_width_ = 0;
            for (int p = 0; p < S_.points; ++p)
                if (model_[p]) big_width_ = std::max(big_width_, popcount(distinct_indices(p)));
        }
        return big_width_;
    }

    // Some factor c (b ∈ ρ{c}, ρ total) avoids D_ij for all i ≠ j below the width.
    bool is_big(int b) {
        if (!is_model(b)) return false;
        int k = big_width();
        for (auto& rho : total_maps())
            for (int c = 0; c < S_.points; ++c) {
                bool off = true;
                for (int i = 0; i < k && off; ++i)
                    for (int j = 0; j < i && off; ++j) off = !S_.D(i, j).contains(c);
                if (off && factor(rho, c, b)) return true;
            }
        return false;
    }

    std::optional<int> find_model_point(const PointSet& v, int a) {
        if (!v.contains(a)) throw error("find_model_point: a is not in v");
        if (!(complete_closed(a, 0) == v)) throw error("find_model_point: v is not a complete closed set of dimension ∅");
        if (is_model(a)) return a;
        std::optional<int> found;
        v.for_each([&](int b) {
            if (!found && is_model(b) && exists_factor(a, b, false)) found = b;
        });
        return found;
    }

private:
    const CylSpace& S_;
    std::vector<std::optional<Partition>> cc_;
    std::map<std::pair<std::vector<int>, IndexSet>, std::optional<Schedule>> schedules_;
    std::map<std::pair<std::vector<int>, int>, PointSet> point_cache_;
    std::optional<Coordinates> coords_;
    bool coords_tried_ = false;
    std::vector<VarMap> totals_;
    std::vector<char> model_;
    int big_width_ = -1;

    std::vector<VarMap> partial_maps() {
        std::vector<VarMap> out;
        const int n = S_.dim;
        std::vector<int> v(n, -1);
        while (true) {
            VarMap r = VarMap::total(v);
            if (!r.is_total()) out.push_back(r);
            int k = n - 1;
            while (k >= 0 && ++v[k] == n) v[k--] = -1;
            if (k < 0) break;
        }
        std::stable_sort(out.begin(), out.end(),
                         [](const VarMap& x, const VarMap& y) { return popcount(x.domain()) > popcount(y.domain()); });
        return out;
    }

    const std::optional<Schedule>& schedule(const VarMap& rho, IndexSet d) {
        std::vector<int> key(S_.dim, -1);
        for (int j : members(d)) key[j] = rho(j);
        auto [it, fresh] = schedules_.try_emplace({key, d});
        if (fresh) {
            if (literal_feasible(S_.dim, d, rho)) {
                auto js = members(d);
                auto spare = spare_indices(S_.dim, d | rho.image(d));
                std::vector<int> ks(spare.begin(), spare.begin() + js.size()), is;
                for (int j : js) is.push_back(rho(j));
                it->second = literal_schedule(js, ks, is);
            } else {
                it->second = compact_schedule(S_.dim, d, rho);
            }
        }
        return it->second;
    }

    const std::optional<Coordinates>& coordinates() {
        if (!coords_tried_) {
            coords_ = coordinatize(S_);
            coords_tried_ = true;
        }
        return coords_;
    }

    // Permutation of a closed set w with Δ(w) = d. When no copy program realises ρ on d, w is cut
    // into hulls over smaller index sets that are realisable and intersected back.
    PointSet permute_exact(const PointSet& w, IndexSet d, const VarMap& rho) {
        check_domain(d, rho);
        if (auto& sc = schedule(rho, d)) return apply_schedule(S_, w, *sc);
        PointSet out = S_.all(), back = S_.all();
        for (int j : members(d)) {
            IndexSet s = d & ~bit(j);
            auto piece = hull(w, s);
            back &= piece;
            out &= permute_exact(piece, dimension_set(S_, piece), rho);
        }
        if (back == w) return out;
        if (auto& C = coordinates()) return permute_by_coordinates(S_, *C, w, rho);
        if (S_.presentation) return permute_by_presentation(S_, *S_.presentation, w, rho);
        throw resource_error("cannot permute a set with Δ = " + format_indices(d) + " by " + rho.str() +
                             " within dimension " + std::to_string(S_.dim) + "; a larger budget is needed");
    }

    void ensure_models() {
        if (!model_.empty()) return;
        model_.assign(S_.points, 1);
        Partition atoms = basis_atoms(S_);
        for (int at = 0; at < atoms.count(); ++at) {
            PointSet u = atoms.block_set(at);
            for (int i = 0; i < S_.dim; ++i) {
                PointSet reach = saturate(S_, u, i);
                for (int j = 0; j < S_.dim; ++j) reach -= subst_set(S_, u, j, i);
                reach.for_each([&](int b) { model_[b] = 0; });
            }
        }
    }
};

inline PointSet complete_closed(const CylSpace& S, int a, IndexSet s) { return Calculus(S).complete_closed(a, s); }
inline int permute_point(const CylSpace& S, const VarMap& rho, int a) { return Calculus(S).permute_point(rho, a); }
inline bool factor(const CylSpace& S, const VarMap& rho, int a, int b) { return Calculus(S).factor(rho, a, b); }
inline std::optional<FactorWitness> exists_factor(const CylSpace& S, int a, int b, bool require_equiv) {
    return Calculus(S).exists_factor(a, b, require_equiv);
}
inline ModelFlags is_model_point(const CylSpace& S, int b) { return Calculus(S).model_flags(b); }
inline bool equivalent_points(const CylSpace& S, int a, int b) { return Calculus(S).equivalent(a, b); }

struct PointLawOptions {
    std::uint64_t seed = 0;
    int sample_maps = 64;  // used when n = 4
};

inline Report verify_point_laws(Calculus& K, const PointLawOptions& opt = {}) {
    Report R;
    const auto& S = K.space();
    static const char* laws[] = {"ρ{a} ≠ ∅ on fiber diagonals", "|ρ{a}| ≤ 1 for surjective ρ",
                                 "a lies in exactly one ρ{a′}", "(ρ′∘ρ)u = ρ′(ρu)",
                                 "factor transitivity", "≍ reflexive", "≍ symmetric", "≍ transitive"};
    if (!is_t2(S)) {
        for (auto l : laws) R.skip(l, "space is not T2");
        return R;
    }
    if (S.dim > 4) {
        for (auto l : laws) R.skip(l, "dimension above 4");
        return R;
    }
    const int N = S.points;
    std::vector<VarMap> maps = VarMap::all_total(S.dim);
    if (S.dim == 4) {
        std::mt19937_64 rng(opt.seed);
        std::shuffle(maps.begin(), maps.end(), rng);
        maps.resize(std::min<std::size_t>(maps.size(), opt.sample_maps));
    }
    R.counters["maps"] = maps.size();
    std::vector<std::vector<PointSet>> table(maps.size());
    for (size_t r = 0; r < maps.size(); ++r)
        for (int a = 0; a < N; ++a) table[r].push_back(K.permute_points(a, maps[r]));

    for (size_t r = 0; r < maps.size(); ++r) {
        const auto& rho = maps[r];
        for (int a = 0; a < N; ++a) {
            std::string w = "ρ=" + rho.str() + " a=" + S.point_name(a);
            bool on_diag = true;
            for (int i = 0; i < S.dim; ++i)
                for (int j = 0; j < S.dim; ++j)
                    if (rho(i) == rho(j) && !S.D(i, j).contains(a)) on_diag = false;
            if (on_diag) R.check(laws[0], !table[r][a].empty(), w);
            if (rho.surjective()) R.check(laws[1], table[r][a].size() <= 1, w);
            int pre = 0;
            for (int a2 = 0; a2 < N; ++a2) pre += table[r][a2].contains(a);
            R.check(laws[2], pre == 1, w + " preimages=" + std::to_string(pre));
        }
    }

    std::map<std::vector<int>, size_t> index;
    for (size_t r = 0; r < maps.size(); ++r) index[maps[r].to] = r;
    for (size_t r = 0; r < maps.size(); ++r)
        for (size_t r2 = 0; r2 < maps.size(); ++r2) {
            auto comp = compose(maps[r2], maps[r]);
            auto it = index.find(comp.to);
            for (int a = 0; a < N; ++a) {
                std::string w = "ρ=" + maps[r].str() + " ρ′=" + maps[r2].str() + " a=" + S.point_name(a);
                PointSet two_step = table[r][a].empty() ? S.none() : K.permute_closed(table[r][a], maps[r2]);
                PointSet direct = it != index.end() ? table[it->second][a] : K.permute_points(a, comp);
                R.check(laws[3], two_step == direct, w);
                table[r][a].for_each([&](int b) {
                    PointSet next = table[r2][b];
                    R.check(laws[4], next.subset_of(direct), w + " b=" + S.point_name(b));
                });
            }
        }

    std::vector<std::vector<char>> eqv(N, std::vector<char>(N, 0));
    for (size_t r = 0; r < maps.size(); ++r)
        for (int a = 0; a < N; ++a)
            table[r][a].for_each([&](int b) {
                if (K.covers_range(maps[r], b)) eqv[a][b] = 1;
            });
    for (int a = 0; a < N; ++a) {
        R.check(laws[5], eqv[a][a], "a=" + S.point_name(a));
        for (int b = 0; b < N; ++b) {
            std::string w = "a=" + S.point_name(a) + " b=" + S.point_name(b);
            R.check(laws[6], !eqv[a][b] || eqv[b][a], w);
            if (!eqv[a][b]) continue;
            for (int c = 0; c < N; ++c)
                if (eqv[b][c]) R.check(laws[7], eqv[a][c], w + " c=" + S.point_name(c));
        }
    }
    return R;
}

inline Report verify_point_laws(const CylSpace& S, const PointLawOptions& opt = {}) {
    Calculus K(S);
    return verify_point_laws(K, opt);
}

}  // namespace cyl
