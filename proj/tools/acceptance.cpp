// Acceptance runner: one PASS/FAIL line per criterion, details indented below it.
#include "cylspace/expansion.hpp"
#include "cylspace/io.hpp"
#include "cylspace/model_space.hpp"

#include <chrono>
#include <iostream>
#include <random>

using namespace cyl;

namespace {

struct Criterion {
    int id = 0;
    std::string title;
    bool pass = true;
    std::vector<std::string> notes;
    double ms = 0;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            notes.push_back("failed: " + what);
        }
    }
    void note(const std::string& s) { notes.push_back(s); }
};

std::string first_failure(const Report& R) {
    for (auto& r : R.results)
        if (r.status == Status::Fail) return r.law + " [" + r.witness + "]";
    return {};
}

template <class F>
Criterion run(int id, std::string title, F&& body) {
    Criterion c;
    c.id = id;
    c.title = std::move(title);
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.require(false, std::string("exception: ") + e.what());
    }
    c.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return c;
}

struct Corpus {
    CylSpace pure2 = parse_space(read_file(SAMPLES_DIR "/pure2.space"), "pure2");
    CylSpace g1_base = to_explicit(build_topologization(g1(), 2).space);
    std::vector<FiniteStructure> structures;
    std::vector<std::pair<std::string, CylSpace>> spaces;

    Corpus() {
        g1_base.name = "G1 n=2";
        for (int mask = 0; mask < 16; ++mask) structures.push_back(digraph(mask, 2, "digraph " + std::to_string(mask)));
        for (int m = 1; m <= 3; ++m) structures.push_back(pure_set(m));
        for (auto& A : structures)
            for (int n : {2, 3}) spaces.emplace_back(A.name + " n=" + std::to_string(n), build_topologization(A, n).space);
        for (auto* base : {&pure2, &g1_base})
            for (int alpha : {2, 3}) {
                auto ctx = make_expansion_context(*base, alpha);
                for (bool reversed : {false, true})
                    spaces.emplace_back("expansion of " + base->name + " to " + std::to_string(alpha) +
                                            (reversed ? " (reversed order)" : ""),
                                        build_expansion(ctx, AtomOrder{reversed}).space);
            }
        for (auto& [name, cat] : catalogs()) spaces.emplace_back("model space " + name, build_model_space(cat, 3).space);
    }

    static std::vector<std::pair<std::string, std::vector<FiniteStructure>>> catalogs() {
        return {{"digraph catalog", digraph_catalog()},
                {"{G1,G2}", {g1(), g2()}},
                {"{G1}", {g1()}},
                {"{G1,edgeless}", {g1(), digraph(0, 2, "edgeless")}},
                {"{pure 2-set}", {pure_set(2)}},
                {"{one-element}", {pure_set(1)}}};
    }
};

}  // namespace

int main() {
    Corpus corpus;
    std::vector<Criterion> out;

    out.push_back(run(1, "substitution calculus on all 16 two-element digraphs, n=3", [&](Criterion& c) {
        std::uint64_t checks = 0;
        for (int mask = 0; mask < 16; ++mask) {
            auto T = build_topologization(digraph(mask), 3);
            LawOptions opt;
            opt.seed = 1000 + mask;
            opt.law6_samples = 50;
            auto R = verify_substitution_laws(T.space, opt);
            c.require(R.ok(), "digraph " + std::to_string(mask) + ": " + first_failure(R));
            for (auto& r : R.results) checks += r.checked;
            auto* fresh = R.find("fresh-index independence");
            c.require(fresh && fresh->status == Status::Pass && fresh->checked > 0,
                      "fresh-index comparisons ran on digraph " + std::to_string(mask));
        }
        c.note(std::to_string(checks) + " law instances");
    }));
    out.back().require(out.back().ms < 10000, "runtime under 10 s");

    out.push_back(run(2, "axiom suites on every corpus space", [&](Criterion& c) {
        for (auto& [name, S] : corpus.spaces) {
            auto R = check_space_axioms(S);
            c.require(R.ok(), name + ": " + first_failure(R));
        }
        c.note(std::to_string(corpus.spaces.size()) + " spaces");
    }));

    out.push_back(run(3, "point laws on all T2 corpus spaces with n <= 3", [&](Criterion& c) {
        int t2 = 0;
        for (auto& [name, S] : corpus.spaces) {
            if (!is_t2(S) || S.dim > 3) continue;
            ++t2;
            Report R;
            try {
                R = verify_point_laws(S);
            } catch (const std::exception& e) {
                c.require(false, name + ": " + e.what());
                continue;
            }
            c.require(R.ok(), name + ": " + first_failure(R));
            for (auto& r : R.results) c.require(r.status == Status::Pass, name + ": " + r.law + " not run");
        }
        c.note(std::to_string(t2) + " T2 spaces");
    }));
    out.back().require(out.back().ms < 30000, "runtime under 30 s");

    out.push_back(run(4, "atoms: every seed extends; pure 2-set to 3 has 4 atoms", [&](Criterion& c) {
        auto seeds = [&](const CylSpace& base, int alpha, const std::string& label) {
            auto ctx = make_expansion_context(base, alpha);
            int good = 0, bad = 0, bad_injective = 0;
            std::string example;
            for (int r = 0; r < (int)ctx.maps.size(); ++r)
                for (int u = 0; u < (int)ctx.sets.size(); ++u) {
                    if (ctx.sets[u].empty()) continue;
                    bool ok = false;
                    try {
                        auto x = extend_to_atom(ctx, r, u);
                        ok = is_atom(ctx, x).ok() && ctx.member(x, r, u);
                    } catch (const error&) {
                    }
                    if (ok) {
                        ++good;
                        continue;
                    }
                    ++bad;
                    bad_injective += ctx.maps[r].injective();
                    if (example.empty()) example = ctx.node_name(ctx.node(r, u));
                }
            c.note(label + ": " + std::to_string(good) + " seeds extend, " + std::to_string(bad) + " do not (" +
                   std::to_string(bad_injective) + " with injective maps)" + (example.empty() ? "" : ", e.g. " + example));
            c.require(bad == 0, label + ": every seed extends to an atom");
        };
        seeds(corpus.pure2, 3, "pure 2-set, 2 to 3");
        seeds(corpus.g1_base, 2, "G1, 2 to 2");

        auto ctx = make_expansion_context(corpus.pure2, 3);
        auto en = enumerate_atoms(ctx);
        // equality patterns of 3 variables over a 2-element set: partitions with at most 2 blocks
        std::set<std::vector<int>> patterns;
        for (int code = 0; code < 8; ++code) {
            std::vector<int> v(3), label(2, -1);
            int next = 0;
            for (int i = 0; i < 3; ++i) {
                int x = code >> i & 1;
                if (label[x] < 0) label[x] = next++;
                v[i] = label[x];
            }
            patterns.insert(v);
        }
        c.require(en.atoms.size() == 4 && patterns.size() == 4, "atom count " + std::to_string(en.atoms.size()) +
                                                                     " vs equality types " + std::to_string(patterns.size()));
        c.note("enumerate_atoms: " + std::to_string(en.atoms.size()) + " atoms, oracle " + std::to_string(patterns.size()));
        c.note("seeds (ρ,u) with ρ non-injective and u missing the diagonal ρ forces lie in no atom: the coherence "
               "condition ties them to (ρ′,∅); see notes/decisions.md");
    }));

    out.push_back(run(5, "expansions: FOL checks, expansion map, uniqueness, α=β homeomorphism", [&](Criterion& c) {
        for (auto* base : {&corpus.pure2, &corpus.g1_base})
            for (int alpha : {2, 3}) {
                std::string label = base->name + " to " + std::to_string(alpha);
                auto ctx = make_expansion_context(*base, alpha);
                c.require(ctx.report.ok(), label + ": " + first_failure(ctx.report));
                auto X1 = build_expansion(ctx);
                auto X2 = build_expansion(ctx, AtomOrder{true});
                for (auto* X : {&X1, &X2}) {
                    c.require(X->report.ok(), label + ": " + first_failure(X->report));
                    c.require(check_space_axioms(X->space).ok(), label + ": axioms");
                    c.require(is_t2(X->space), label + ": T2");
                }
                auto U = verify_expansion_uniqueness(ctx, X1, X2);
                c.require(U.ok(), label + ": uniqueness " + first_failure(U));
                if (!is_t2(*base)) continue;
                auto F = classify_mapping(X1.space, *base, expansion_map(ctx, X1));
                c.require(F.c_mapping && F.basis_preserving && F.surjective, label + ": expansion map " + F.why);
                if (alpha == base->dim) {
                    auto G = classify_mapping(*base, X1.space, base_injection(ctx, X1));
                    c.require(G.homeomorphism, label + ": base injection " + G.why);
                }
            }
    }));

    const auto catalog = digraph_catalog();
    auto MS = build_model_space(catalog, 3);
    Calculus K(MS.space);

    out.push_back(run(6, "semantics bridge on the 10-digraph catalog, n=3", [&](Criterion& c) {
        std::vector<int> reps;
        for (int s = 0; s < (int)catalog.size(); ++s) {
            auto& ix = MS.index[s];
            for (int p = 0; p < ix.count(); ++p) {
                auto a = ix.decode(p);
                if ((int)std::set<int>(a.begin(), a.end()).size() == catalog[s].domain_size) {
                    reps.push_back(MS.class_map[s][p]);
                    break;
                }
            }
        }
        int agree = 0, pairs = 0;
        for (int a : reps)
            for (int b : reps) {
                ++pairs;
                agree += decide_embedding(MS, K, a, b).agree();
            }
        c.require(pairs == 100 && agree == 100, "(a) agreement on " + std::to_string(agree) + "/" + std::to_string(pairs));

        int models = 0, mismatch = 0;
        for (int a = 0; a < MS.space.points; ++a) {
            if (!K.is_model(a)) continue;
            ++models;
            for (int b = 0; b < MS.space.points; ++b)
                if (K.is_model(b))
                    mismatch += K.equivalent(a, b) !=
                                pinned_isomorphism(MS.structure_of(a), MS.structure_of(b)).has_value();
        }
        c.require(mismatch == 0, "(b) ≍ against isomorphism: " + std::to_string(mismatch) + " mismatches");

        int full = count_iso_classes(MS, K);
        auto small = build_model_space({g1(), g2()}, 3);
        Calculus KS(small.space);
        int pair = count_iso_classes(small, KS);
        c.require(full == 10 && count_iso_classes_oracle(catalog) == 10, "(c) catalog count " + std::to_string(full));
        c.require(pair == 1, "(c) {G1,G2} count " + std::to_string(pair));

        auto R = verify_model_space(MS, K);
        for (auto law : {"domain points map to big model points", "domain-point image is one ≍-class"}) {
            auto* r = R.find(law);
            c.require(r && r->status == Status::Pass, std::string("(d) ") + law);
        }
        auto* e = R.find("represented structure is isomorphic to its member");
        c.require(e && e->status == Status::Pass, "(e) representation round trip");
        c.require(R.ok(), "model space suite: " + first_failure(R));
        c.note(std::to_string(models) + " model points, " + std::to_string(MS.space.points) + " points");
        c.note("finite structures: elementary embeddings are isomorphisms, so (a) compares against isomorphism");
    }));
    out.back().require(out.back().ms < 60000, "runtime under 60 s");

    out.push_back(run(7, "partial factors on 100 seeded pin sets", [&](Criterion& c) {
        std::mt19937_64 rng(20261017);
        const int N = MS.space.points, n = MS.dim();
        int disagree = 0, positive = 0;
        for (int t = 0; t < 100; ++t) {
            int a = (int)(rng() % N);
            VarMap rho(n);
            for (int i = 0; i < n; ++i)
                if (rng() % 3) rho.to[i] = (int)(rng() % n);
            int b = (int)(rng() % N);
            if (t % 2 == 0) {
                // aim at the transport of a so that both verdicts are exercised
                auto image = K.permute_points(a, rho);
                if (!image.empty()) {
                    auto el = image.elements();
                    b = el[rng() % el.size()];
                }
            }
            auto v = decide_partial_embedding(MS, K, a, b, rho);
            disagree += !v.agree();
            positive += v.oracle;
        }
        c.require(disagree == 0, std::to_string(disagree) + " disagreements");
        c.note(std::to_string(positive) + " of 100 samples are partial elementary maps");
    }));

    out.push_back(run(8, "type spaces: orbit counts and complete closed sets", [&](Criterion& c) {
        int embeddings = 0;
        for (auto& A : corpus.structures) {
            auto M1 = build_model_space({A}, 3);
            Calculus K1(M1.space);
            for (int k = 1; k <= 2; ++k) {
                std::vector<std::vector<int>> params{{}};
                for (int x = 0; x < A.domain_size; ++x) params.push_back({x});
                for (auto& B : params) {
                    std::set<int> Bs(B.begin(), B.end());
                    int got = (int)type_space(A, k, Bs).types.size(), want = type_count_by_orbits(A, k, Bs);
                    c.require(got == want, A.name + " k=" + std::to_string(k) + ": " + std::to_string(got) + " vs " +
                                               std::to_string(want));
                    std::vector<int> pins;
                    if (!B.empty()) pins.push_back(2);
                    auto E = type_space_embedding(M1, K1, 0, k, B, pins);
                    ++embeddings;
                    c.require(E.report.ok(), A.name + " k=" + std::to_string(k) + ": " + first_failure(E.report));
                }
            }
        }
        c.note(std::to_string(embeddings) + " embeddings checked");
    }));

    bool all = true;
    for (auto& c : out) {
        all = all && c.pass;
        std::printf("%s criterion %d: %s (%.0f ms)\n", c.pass ? "PASS" : "FAIL", c.id, c.title.c_str(), c.ms);
        for (auto& n : c.notes) std::printf("    %s\n", n.c_str());
    }
    return all ? 0 : 1;
}
