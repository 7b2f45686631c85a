// cylspace: command-line front end for the cylindric-space library.
#include "cylspace/expansion.hpp"
#include "cylspace/io.hpp"
#include "cylspace/model_space.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <future>
#include <iostream>

using namespace cyl;
using json = nlohmann::ordered_json;

namespace {

enum Exit { ok = 0, check_failed = 1, usage = 2, resource = 3 };

struct Options {
    int n = 3;
    int limit = default_point_limit;
    std::uint64_t seed = 0;
    bool json = false;
    bool parallel = false;
    bool timings = false;
};

// Collected output of one command.
struct Run {
    std::string command;
    json inputs = json::object();
    Report report;
    json output = json::object();
    std::vector<std::string> lines;  // text-mode body
    std::vector<std::pair<std::string, double>> timings;

    template <class F>
    auto timed(const std::string& what, F&& f) {
        auto t0 = std::chrono::steady_clock::now();
        auto result = f();
        timings.emplace_back(what, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
        return result;
    }
};

std::string stem(const std::string& path) { return std::filesystem::path(path).stem().string(); }
bool is_space_file(const std::string& path) { return std::filesystem::path(path).extension() == ".space"; }

FiniteStructure load_structure(const std::string& path) { return parse_structure(read_file(path), stem(path)); }

CylSpace load_space(const std::string& path, const Options& opt) {
    if (is_space_file(path)) return parse_space(read_file(path), stem(path));
    auto T = build_topologization(load_structure(path), opt.n, opt.limit);
    T.space.name = stem(path) + " n=" + std::to_string(opt.n);
    return std::move(T.space);
}

// A set argument: a formula over a structure file, or "{p,...}" for an explicit space.
PointSet read_set(const std::string& path, const CylSpace& S, const std::string& text, const Options& opt) {
    if (!text.empty() && text.front() == '{') {
        PointSet u(S.points);
        std::string body = text.substr(1, text.find('}') == std::string::npos ? std::string::npos : text.find('}') - 1);
        std::stringstream ss(body);
        for (std::string item; std::getline(ss, item, ',');) {
            if (item.find_first_not_of(" ") == std::string::npos) continue;
            int p = std::stoi(item);
            if (p < 0 || p >= S.points) throw error("point " + item + " out of range");
            u.insert(p);
        }
        return u;
    }
    if (is_space_file(path)) throw error("sets of an explicit space are written as {p,...}");
    auto A = load_structure(path);
    return build_topologization(A, opt.n, opt.limit).interpret(text);
}

VarMap read_map(const std::string& text, int n) {
    VarMap rho(n);
    std::stringstream ss(text);
    int i = 0;
    for (std::string item; std::getline(ss, item, ','); ++i) {
        if (i >= n) throw error("map has more than " + std::to_string(n) + " entries");
        if (item == "_" || item == "-") continue;
        int j = std::stoi(item);
        if (j < 0 || j >= n) throw error("map value " + item + " outside 0.." + std::to_string(n - 1));
        rho.to[i] = j;
    }
    return rho;
}

std::pair<int, Assignment> read_point_spec(const std::string& text, const ModelSpace& MS) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw error("point '" + text + "' is not of the form NAME:a0,a1,...");
    std::string name = text.substr(0, colon);
    int member = -1;
    for (size_t s = 0; s < MS.catalog.size(); ++s)
        if (MS.catalog[s].name == name) member = (int)s;
    if (member < 0) throw error("no catalog member named " + name);
    Assignment a;
    std::stringstream ss(text.substr(colon + 1));
    for (std::string item; std::getline(ss, item, ',');) a.push_back(std::stoi(item));
    if ((int)a.size() != MS.dim()) throw error("point " + text + " needs " + std::to_string(MS.dim()) + " entries");
    for (int x : a)
        if (x < 0 || x >= MS.catalog[member].domain_size) throw error("element out of range in " + text);
    return {member, a};
}

json to_json(const Run& run, const Options& opt) {
    json j;
    j["command"] = run.command;
    j["inputs"] = run.inputs;
    json results = json::array();
    for (auto& r : run.report.results) {
        json e;
        e["law"] = r.law;
        e["status"] = to_string(r.status);
        if (!r.witness.empty()) e["witness"] = r.witness;
        e["checked"] = r.checked;
        results.push_back(e);
    }
    j["results"] = results;
    if (!run.output.empty()) j["output"] = run.output;
    json t = json::object();
    if (opt.timings)
        for (auto& [k, v] : run.timings) t[k] = v;
    j["timings_ms"] = t;
    json c = json::object();
    for (auto& [k, v] : run.report.counters) c[k] = v;
    j["counters"] = c;
    return j;
}

void print_text(const Run& run, const Options& opt) {
    std::cout << run.command << "\n";
    for (auto& l : run.lines) std::cout << l << "\n";
    for (auto& r : run.report.results) {
        switch (r.status) {
        case Status::Pass: std::cout << "  pass  " << r.law << " (" << r.checked << ")\n"; break;
        case Status::Fail: std::cout << "  FAIL  " << r.law << ": " << r.witness << "\n"; break;
        case Status::Skipped: std::cout << "  skip  " << r.law << ": " << r.witness << "\n"; break;
        }
    }
    if (!run.report.counters.empty()) {
        std::cout << "counters:";
        for (auto& [k, v] : run.report.counters) std::cout << " " << k << "=" << v;
        std::cout << "\n";
    }
    if (opt.timings)
        for (auto& [k, v] : run.timings) std::printf("time %s: %.1f ms\n", k.c_str(), v);
    std::cout << (run.report.ok() ? "ok" : "FAILED") << "\n";
}

// --- commands ----------------------------------------------------------------

void cmd_check_space(Run& run, const std::string& file, const Options& opt) {
    auto S = run.timed("load", [&] { return load_space(file, opt); });
    run.inputs["file"] = file;
    run.inputs["n"] = S.dim;
    run.inputs["seed"] = opt.seed;
    run.lines.push_back("space " + S.name + ": " + std::to_string(S.points) + " points, dimension " + std::to_string(S.dim) +
                        (is_t2(S) ? ", T2" : ", not T2"));
    LawOptions lo;
    lo.seed = opt.seed;
    PointLawOptions po;
    po.seed = opt.seed;
    auto axioms = [&] { return check_space_axioms(S); };
    auto subst = [&] { return verify_substitution_laws(S, lo); };
    auto points = [&] { return verify_point_laws(S, po); };
    Report a, s, p;
    if (opt.parallel) {
        auto fa = std::async(std::launch::async, axioms);
        auto fs = std::async(std::launch::async, subst);
        auto fp = std::async(std::launch::async, points);
        a = fa.get();
        s = fs.get();
        p = fp.get();
    } else {
        a = run.timed("axioms", axioms);
        s = run.timed("substitution laws", subst);
        p = run.timed("point laws", points);
    }
    run.report.merge(a, "axioms: ");
    run.report.merge(s, "substitution: ");
    run.report.merge(p, "points: ");
    run.report.counters["points"] = S.points;
}

void cmd_eval(Run& run, const std::string& file, const std::string& formula, const Options& opt) {
    auto A = load_structure(file);
    auto T = build_topologization(A, opt.n, opt.limit);
    run.inputs["file"] = file;
    run.inputs["n"] = opt.n;
    run.inputs["formula"] = formula;
    auto f = parse_formula(formula, A.sig);
    auto u = run.timed("evaluate", [&] { return T.interpret(f); });
    json list = json::array();
    u.for_each([&](int p) {
        list.push_back(T.assignment(p));
        run.lines.push_back("  " + T.space.point_name(p));
    });
    run.output["formula"] = render(f);
    run.output["free_vars"] = free_vars(f);
    run.output["assignments"] = list;
    run.report.counters["satisfying"] = u.size();
    run.report.counters["assignments"] = T.space.points;
    run.lines.push_back(std::to_string(u.size()) + " of " + std::to_string(T.space.points) + " assignments satisfy " +
                        render(f));
}

void cmd_subst(Run& run, const std::string& file, const std::string& set, int i, int j, const Options& opt) {
    auto S = load_space(file, opt);
    check_index(S, i);
    check_index(S, j);
    run.inputs["file"] = file;
    run.inputs["set"] = set;
    run.inputs["i"] = i;
    run.inputs["j"] = j;
    auto u = read_set(file, S, set, opt);
    auto v = subst_set(S, u, i, j);
    run.output["u"] = S.set_name(u);
    run.output["result"] = S.set_name(v);
    run.output["dimension_set"] = members(dimension_set(S, v));
    run.lines.push_back("u       = " + S.set_name(u));
    run.lines.push_back("u(" + std::to_string(i) + "/" + std::to_string(j) + ") = " + S.set_name(v));
    if (!is_space_file(file)) {
        auto A = load_structure(file);
        auto f = parse_formula(set, A.sig);
        auto g = substitute_var(f, j, i, opt.n);
        auto T = build_topologization(A, opt.n, opt.limit);
        run.report.check("set substitution matches the substituted formula " + render(g), T.interpret(g) == v);
    }
}

void cmd_perm(Run& run, const std::string& file, const std::string& set, const std::string& map, const Options& opt) {
    auto S = load_space(file, opt);
    auto rho = read_map(map, S.dim);
    run.inputs["file"] = file;
    run.inputs["set"] = set;
    run.inputs["map"] = rho.str();
    auto u = read_set(file, S, set, opt);
    Calculus K(S);
    auto v = K.permute_closed(u, rho);
    run.output["u"] = S.set_name(u);
    run.output["result"] = S.set_name(v);
    run.lines.push_back("u  = " + S.set_name(u));
    run.lines.push_back("ρu = " + S.set_name(v) + " for ρ = " + rho.str());
    if (literal_feasible(S.dim, dimension_set(S, u), rho))
        run.report.check("agrees with the fresh-index formula", permute_set(S, u, rho) == v);
    else
        run.report.skip("agrees with the fresh-index formula",
                        "needs " + std::to_string(required_budget(dimension_set(S, u), rho)) + " indices");
    if (auto C = coordinatize(S)) run.report.check("agrees with the coordinate pullback", permute_by_coordinates(S, *C, u, rho) == v);
}

void cmd_embed(Run& run, const std::vector<std::string>& files, const std::string& a_spec, const std::string& b_spec,
               const std::string& partial, const Options& opt) {
    std::vector<FiniteStructure> catalog;
    for (auto& f : files) catalog.push_back(load_structure(f));
    run.inputs["catalog"] = files;
    run.inputs["n"] = opt.n;
    auto MS = run.timed("model space", [&] { return build_model_space(catalog, opt.n, opt.limit); });
    Calculus K(MS.space);
    run.lines.push_back("elementary embeddings between finite structures are isomorphisms; partial pins give the "
                        "non-degenerate test");
    auto verdict_json = [&](int a, int b, const EmbeddingVerdict& v) {
        json e;
        e["a"] = MS.space.point_name(a);
        e["b"] = MS.space.point_name(b);
        e["factor"] = v.topological;
        e["oracle"] = v.oracle;
        e["agree"] = v.agree();
        if (v.witness) e["witness"] = v.witness->str();
        return e;
    };
    json verdicts = json::array();
    if (!a_spec.empty() || !b_spec.empty()) {
        if (a_spec.empty() || b_spec.empty()) throw CLI::ValidationError("--a and --b go together");
        auto [sa, xa] = read_point_spec(a_spec, MS);
        auto [sb, xb] = read_point_spec(b_spec, MS);
        int a = MS.point_of(sa, xa), b = MS.point_of(sb, xb);
        EmbeddingVerdict v;
        if (partial.empty()) {
            v = decide_embedding(MS, K, a, b);
        } else {
            run.inputs["partial"] = partial;
            v = decide_partial_embedding(MS, K, a, b, parse_pins(partial, MS.dim()));
        }
        run.report.check("factor verdict agrees with the isomorphism oracle", v.agree(),
                         MS.space.point_name(a) + " → " + MS.space.point_name(b));
        run.lines.push_back(MS.space.point_name(a) + " → " + MS.space.point_name(b) + ": factor " +
                            (v.topological ? "yes" : "no") + ", oracle " + (v.oracle ? "yes" : "no"));
        verdicts.push_back(verdict_json(a, b, v));
    } else {
        // every ordered pair of model points representing catalog members
        std::vector<int> reps;
        for (size_t s = 0; s < catalog.size(); ++s)
            for (int p = 0; p < MS.index[s].count(); ++p) {
                auto x = MS.index[s].decode(p);
                if ((int)std::set<int>(x.begin(), x.end()).size() == catalog[s].domain_size) {
                    reps.push_back(MS.class_map[s][p]);
                    break;
                }
            }
        if (reps.size() < catalog.size()) throw resource_error("budget n is below a domain size");
        for (int a : reps)
            for (int b : reps) {
                EmbeddingVerdict v = partial.empty() ? decide_embedding(MS, K, a, b)
                                                     : decide_partial_embedding(MS, K, a, b, parse_pins(partial, MS.dim()));
                run.report.check("factor verdict agrees with the isomorphism oracle", v.agree(),
                                 MS.space.point_name(a) + " → " + MS.space.point_name(b));
                verdicts.push_back(verdict_json(a, b, v));
            }
        if (!partial.empty()) run.inputs["partial"] = partial;
    }
    run.output["verdicts"] = verdicts;
    run.report.counters["pairs"] = verdicts.size();
}

void cmd_expand(Run& run, const std::string& file, int alpha, bool reversed, const Options& opt) {
    auto base = load_space(file, opt);
    if (!base.is_explicit()) base = to_explicit(base);
    run.inputs["file"] = file;
    run.inputs["alpha"] = alpha;
    run.inputs["reversed"] = reversed;
    auto ctx = run.timed("context", [&] { return make_expansion_context(base, alpha); });
    run.report.merge(ctx.report, "context: ");
    auto en = run.timed("atoms", [&] { return enumerate_atoms(ctx, AtomOrder{reversed}); });
    auto X = run.timed("expansion", [&] { return build_expansion(ctx, en.atoms); });
    run.report.merge(X.report, "expansion: ");
    run.report.merge(check_space_axioms(X.space), "axioms: ");
    run.report.check("expansion is T2", is_t2(X.space));
    for (auto& x : en.atoms) run.report.check("every enumerated atom passes is_atom", is_atom(ctx, x).ok());
    if (is_t2(base)) {
        auto F = classify_mapping(X.space, base, expansion_map(ctx, X));
        run.report.check("expansion map is a basis-preserving C-surjection", F.c_mapping && F.basis_preserving && F.surjective,
                         F.why);
        if (alpha == base.dim) {
            auto G = classify_mapping(base, X.space, base_injection(ctx, X));
            run.report.check("base injection is a homeomorphism", G.homeomorphism, G.why);
        }
    } else {
        run.report.skip("expansion map is a basis-preserving C-surjection", "base is not T2");
    }
    auto other = build_expansion(ctx, AtomOrder{!reversed});
    run.report.merge(verify_expansion_uniqueness(ctx, X, other), "uniqueness: ");
    run.report.counters["atoms"] = en.atoms.size();
    run.report.counters["atom_condition_solutions"] = en.clause_atoms.size();
    run.report.counters["maps"] = ctx.maps.size();
    run.report.counters["basis_sets"] = ctx.sets.size();
    json atoms = json::array();
    for (int x = 0; x < (int)X.atoms.size(); ++x) atoms.push_back(X.space.point_name(x));
    run.output["atoms"] = atoms;
    run.lines.push_back(std::to_string(en.atoms.size()) + " atoms; expansion has " + std::to_string(X.space.points) +
                        " points in dimension " + std::to_string(alpha));
}

void cmd_modelspace(Run& run, const std::vector<std::string>& files, const Options& opt) {
    std::vector<FiniteStructure> catalog;
    for (auto& f : files) catalog.push_back(load_structure(f));
    run.inputs["catalog"] = files;
    run.inputs["n"] = opt.n;
    auto MS = run.timed("model space", [&] { return build_model_space(catalog, opt.n, opt.limit); });
    Calculus K(MS.space);
    run.report.merge(run.timed("checks", [&] { return verify_model_space(MS, K); }));
    int classes = count_iso_classes(MS, K), oracle = count_iso_classes_oracle(catalog);
    run.report.check("isomorphism classes counted on big model points match the catalog", classes == oracle,
                     std::to_string(classes) + " vs " + std::to_string(oracle));
    run.report.counters["iso_classes"] = classes;
    json table = json::array();
    for (int p = 0; p < MS.space.points; ++p) {
        auto fl = K.model_flags(p);
        json e;
        e["point"] = MS.space.point_name(p);
        e["model"] = fl.model;
        e["big"] = fl.big;
        table.push_back(e);
    }
    run.output["points"] = table;
    json maps = json::object();
    for (size_t s = 0; s < catalog.size(); ++s) maps[catalog[s].name] = MS.class_map[s];
    run.output["class_map"] = maps;
    run.lines.push_back(std::to_string(MS.space.points) + " points, " + std::to_string(classes) +
                        " isomorphism classes of big model points");
}

void cmd_typespace(Run& run, const std::string& file, int k, const std::vector<int>& params, std::vector<int> pins,
                   const Options& opt) {
    auto A = load_structure(file);
    run.inputs["file"] = file;
    run.inputs["k"] = k;
    run.inputs["params"] = params;
    run.inputs["n"] = opt.n;
    std::set<int> B(params.begin(), params.end());
    auto T = type_space(A, k, B);
    int orbits = type_count_by_orbits(A, k, B);
    run.report.check("type count matches automorphism orbits", (int)T.types.size() == orbits,
                     std::to_string(T.types.size()) + " vs " + std::to_string(orbits));
    json types = json::array();
    for (auto& block : T.types) types.push_back(block);
    run.output["types"] = types;
    if (pins.empty())
        for (size_t r = 0; r < params.size(); ++r) pins.push_back(k + (int)r);
    run.inputs["pins"] = pins;
    auto MS = build_model_space({A}, opt.n, opt.limit);
    Calculus K(MS.space);
    auto E = type_space_embedding(MS, K, 0, k, params, pins);
    run.report.merge(E.report, "embedding: ");
    run.output["closed_set"] = MS.space.set_name(E.closed);
    run.lines.push_back(std::to_string(T.types.size()) + " types of " + std::to_string(k) + "-tuples over " +
                        std::to_string(B.size()) + " parameters; the complete closed set has " +
                        std::to_string(E.blocks.size()) + " blocks");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cylindric spaces over finite structures: substitution calculus, expansions and model spaces"};
    app.require_subcommand(1);
    Options opt;
    auto shared = [&](CLI::App* sc) {
        sc->add_option("-n", opt.n, "number of variables (dimension)")->check(CLI::Range(1, 16));
        sc->add_option("--limit", opt.limit, "point limit")->check(CLI::PositiveNumber);
        sc->add_option("--seed", opt.seed, "seed for sampled checks");
        sc->add_flag("--json", opt.json, "print a JSON report");
        sc->add_flag("--parallel", opt.parallel, "run independent checks concurrently");
        sc->add_flag("--timings", opt.timings, "include wall-clock timings");
    };

    std::string file, set, formula, map, a_spec, b_spec, partial;
    std::vector<std::string> files;
    int i = 0, j = 0, alpha = 0, k = 1;
    bool reversed = false;
    std::vector<int> params, pins;

    auto* check = app.add_subcommand("check-space", "axiom, substitution and point-law suites");
    check->add_option("file", file, "structure (.struct) or explicit space (.space)")->required();
    auto* eval = app.add_subcommand("eval", "assignments satisfying a formula");
    eval->add_option("file", file)->required();
    eval->add_option("formula", formula)->required();
    auto* subst = app.add_subcommand("subst", "substitution u(i/j)");
    subst->add_option("file", file)->required();
    subst->add_option("set", set, "formula, or {p,...} for an explicit space")->required();
    subst->add_option("i", i)->required();
    subst->add_option("j", j)->required();
    auto* perm = app.add_subcommand("perm", "permutation ρu");
    perm->add_option("file", file)->required();
    perm->add_option("set", set)->required();
    perm->add_option("map", map, "images of 0..n-1, '_' where undefined, e.g. 1,0,_")->required();
    auto* embed = app.add_subcommand("embed", "factor verdicts against the isomorphism oracle");
    embed->add_option("files", files, "catalog structure files")->required();
    embed->add_option("--a", a_spec, "source point NAME:a0,a1,...");
    embed->add_option("--b", b_spec, "target point NAME:b0,b1,...");
    embed->add_option("--partial", partial, "partial map as pins i:j,...");
    auto* expand = app.add_subcommand("expand", "atoms and the expansion to a higher dimension");
    expand->add_option("file", file)->required();
    expand->add_option("--alpha", alpha, "target dimension")->required();
    expand->add_flag("--reversed", reversed, "reversed well-ordering");
    auto* model = app.add_subcommand("modelspace", "model space of a catalog");
    model->add_option("files", files, "catalog structure files")->required();
    auto* types = app.add_subcommand("typespace", "types over parameters and their complete closed set");
    types->add_option("file", file)->required();
    types->add_option("-k", k, "tuple length")->check(CLI::PositiveNumber);
    types->add_option("--params", params, "parameter elements")->delimiter(',');
    types->add_option("--pins", pins, "coordinates holding the parameters")->delimiter(',');
    for (auto* sc : {check, eval, subst, perm, embed, expand, model, types}) shared(sc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? Exit::ok : Exit::usage;
    }

    Run run;
    for (int a = 0; a < argc; ++a) run.command += (a ? " " : "") + std::string(a ? argv[a] : "cylspace");
    try {
        if (*check) cmd_check_space(run, file, opt);
        else if (*eval) cmd_eval(run, file, formula, opt);
        else if (*subst) cmd_subst(run, file, set, i, j, opt);
        else if (*perm) cmd_perm(run, file, set, map, opt);
        else if (*embed) cmd_embed(run, files, a_spec, b_spec, partial, opt);
        else if (*expand) cmd_expand(run, file, alpha, reversed, opt);
        else if (*model) cmd_modelspace(run, files, opt);
        else if (*types) cmd_typespace(run, file, k, params, pins, opt);
    } catch (const resource_error& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return Exit::resource;
    } catch (const CLI::Error& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return Exit::usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Exit::usage;
    }

    if (opt.json)
        std::cout << to_json(run, opt).dump(2) << "\n";
    else
        print_text(run, opt);
    return run.report.ok() ? Exit::ok : Exit::check_failed;
}
