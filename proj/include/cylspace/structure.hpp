#pragma once

#include "error.hpp"
#include "formula.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace cyl {

using Tuple = std::vector<int>;
using Assignment = std::vector<int>;
using Perm = std::vector<int>;

struct FiniteStructure {
    std::string name;
    int domain_size = 1;
    Signature sig;
    std::vector<std::set<Tuple>> tables;  // parallel to sig.relations

    const std::set<Tuple>& table(std::string_view rel) const {
        for (size_t r = 0; r < sig.relations.size(); ++r)
            if (sig.relations[r].first == rel) return tables[r];
        throw error("unknown relation " + std::string(rel));
    }
    void add_relation(std::string rel, int arity, std::set<Tuple> rows = {}) {
        for (auto& t : rows) check_tuple(rel, arity, t);
        sig.add(std::move(rel), arity);
        tables.push_back(std::move(rows));
    }
    void check_tuple(const std::string& rel, int arity, const Tuple& t) const {
        if ((int)t.size() != arity)
            throw error("relation " + rel + ": tuple has " + std::to_string(t.size()) + " entries, arity is " +
                        std::to_string(arity));
        for (int x : t)
            if (x < 0 || x >= domain_size)
                throw error("relation " + rel + ": element " + std::to_string(x) + " out of range");
    }
};

// --- file format ---------------------------------------------------------

inline FiniteStructure parse_structure(const std::string& text, std::string name = {}) {
    FiniteStructure A;
    A.name = std::move(name);
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    bool have_domain = false, ended = false;
    int cur = -1;
    while (std::getline(in, raw)) {
        ++lineno;
        auto line = raw.substr(0, raw.find('#'));
        std::istringstream ls(line);
        std::vector<std::string> words;
        for (std::string w; ls >> w;) words.push_back(w);
        if (words.empty()) continue;
        auto bad = [&](const std::string& msg) -> parse_error { return parse_error(msg, lineno, 1); };
        if (ended) throw bad("content after 'end'");
        auto as_int = [&](const std::string& w) {
            size_t used = 0;
            int v = 0;
            try { v = std::stoi(w, &used); } catch (...) { used = 0; }
            if (used != w.size()) throw bad("expected an integer, got '" + w + "'");
            return v;
        };
        if (!have_domain) {
            if (words.size() != 2 || words[0] != "domain") throw bad("expected 'domain <m>'");
            A.domain_size = as_int(words[1]);
            if (A.domain_size < 1) throw bad("domain size must be positive");
            have_domain = true;
        } else if (words[0] == "end") {
            if (words.size() != 1) throw bad("malformed 'end' line");
            ended = true;
        } else if (words[0] == "relation") {
            if (words.size() != 3) throw bad("expected 'relation <NAME> <arity>'");
            try {
                A.add_relation(words[1], as_int(words[2]));
            } catch (const parse_error&) {
                throw;
            } catch (const error& e) {
                throw bad(e.what());
            }
            cur = (int)A.tables.size() - 1;
        } else {
            if (cur < 0) throw bad("tuple outside a relation block");
            Tuple t;
            for (auto& w : words) t.push_back(as_int(w));
            auto& [rel, ar] = A.sig.relations[cur];
            try {
                A.check_tuple(rel, ar, t);
            } catch (const error& e) {
                throw bad(e.what());
            }
            A.tables[cur].insert(std::move(t));
        }
    }
    if (!have_domain) throw parse_error("missing 'domain' line", lineno + 1, 1);
    if (!ended) throw parse_error("missing 'end'", lineno + 1, 1);
    return A;
}

inline std::string format_structure(const FiniteStructure& A) {
    std::string s = "domain " + std::to_string(A.domain_size) + "\n";
    for (size_t r = 0; r < A.tables.size(); ++r) {
        s += "relation " + A.sig.relations[r].first + " " + std::to_string(A.sig.relations[r].second) + "\n";
        for (auto& t : A.tables[r]) {
            for (size_t i = 0; i < t.size(); ++i) s += (i ? " " : "") + std::to_string(t[i]);
            s += "\n";
        }
    }
    return s + "end\n";
}

// --- semantics -----------------------------------------------------------

namespace detail {
inline bool eval_rec(const FiniteStructure& A, const Formula& f, Assignment& a) {
    using K = Formula::Kind;
    switch (f.kind()) {
    case K::Atomic: {
        Tuple t;
        t.reserve(f.args().size());
        for (int v : f.args()) t.push_back(a[v]);
        return A.table(f.rel()).contains(t);
    }
    case K::Equal: return a[f.lhs_var()] == a[f.rhs_var()];
    case K::Not: return !eval_rec(A, f.sub(), a);
    case K::And: return eval_rec(A, f.left(), a) && eval_rec(A, f.right(), a);
    case K::Exists: {
        int v = f.bound_var();
        int saved = a[v];
        bool found = false;
        for (int e = 0; e < A.domain_size && !found; ++e) {
            a[v] = e;
            found = eval_rec(A, f.sub(), a);
        }
        a[v] = saved;
        return found;
    }
    }
    return false;
}
}  // namespace detail

inline bool evaluate(const FiniteStructure& A, const Formula& f, Assignment a) {
    int mv = max_var(f);
    if (mv >= (int)a.size())
        throw error("variable v" + std::to_string(mv) + " outside budget " + std::to_string(a.size()));
    for (int x : a)
        if (x < 0 || x >= A.domain_size) throw error("assignment value out of range");
    return detail::eval_rec(A, f, a);
}

inline Tuple apply_perm(const Perm& sigma, const Tuple& t) {
    Tuple out(t.size());
    for (size_t i = 0; i < t.size(); ++i) out[i] = sigma[t[i]];
    return out;
}

inline bool is_automorphism(const FiniteStructure& A, const Perm& sigma) {
    for (auto& tab : A.tables)
        for (auto& t : tab)
            if (!tab.contains(apply_perm(sigma, t))) return false;
    return true;
}

// All automorphisms in lexicographic order; identity first.
inline std::vector<Perm> automorphisms(const FiniteStructure& A) {
    Perm p(A.domain_size);
    std::iota(p.begin(), p.end(), 0);
    std::vector<Perm> out;
    do {
        if (is_automorphism(A, p)) out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

using Pins = std::map<int, int>;

// Lexicographically least isomorphism A -> B extending pins, by backtracking in element order.
inline std::optional<Perm> pinned_isomorphism(const FiniteStructure& A, const FiniteStructure& B, const Pins& pins = {}) {
    std::set<int> targets;
    for (auto [x, y] : pins) {
        if (x < 0 || x >= A.domain_size || y < 0 || y >= B.domain_size) throw error("pin out of range");
        if (!targets.insert(y).second) throw error("pins are not injective");
    }
    if (!(A.sig == B.sig)) throw error("signature mismatch between " + A.name + " and " + B.name);
    if (A.domain_size != B.domain_size) return std::nullopt;
    const int m = A.domain_size;
    for (size_t r = 0; r < A.tables.size(); ++r)
        if (A.tables[r].size() != B.tables[r].size()) return std::nullopt;

    Perm sigma(m, -1);
    std::vector<bool> used(m, false);
    // tuples of A that become fully mapped once element k is assigned
    std::vector<std::vector<std::pair<int, const Tuple*>>> due(m);
    for (size_t r = 0; r < A.tables.size(); ++r)
        for (auto& t : A.tables[r]) due[*std::max_element(t.begin(), t.end())].emplace_back((int)r, &t);

    auto consistent = [&](int k) {
        for (auto [r, t] : due[k])
            if (!B.tables[r].contains(apply_perm(sigma, *t))) return false;
        return true;
    };
    auto rec = [&](auto&& self, int k) -> bool {
        if (k == m) return true;
        auto pin = pins.find(k);
        for (int y = 0; y < m; ++y) {
            if (used[y] || (pin != pins.end() && pin->second != y)) continue;
            if (pin == pins.end() && targets.contains(y)) continue;
            sigma[k] = y;
            used[y] = true;
            if (consistent(k) && self(self, k + 1)) return true;
            used[y] = false;
        }
        sigma[k] = -1;
        return false;
    };
    // Equal table sizes plus forward preservation make the bijection an isomorphism.
    if (rec(rec, 0)) return sigma;
    return std::nullopt;
}

// Pins induced by sending tuple entries position-wise; nullopt if not a well-defined injection.
inline std::optional<Pins> pins_from_tuples(const Tuple& from, const Tuple& to) {
    if (from.size() != to.size()) return std::nullopt;
    Pins p;
    std::map<int, int> back;
    for (size_t i = 0; i < from.size(); ++i) {
        auto [it, fresh] = p.emplace(from[i], to[i]);
        if (!fresh && it->second != to[i]) return std::nullopt;
        auto [jt, fresh2] = back.emplace(to[i], from[i]);
        if (!fresh2 && jt->second != from[i]) return std::nullopt;
    }
    return p;
}

// Types over finite structures: same type over params iff an automorphism fixing params maps t1 to t2.
inline bool same_type_oracle(const FiniteStructure& A, const Tuple& t1, const Tuple& t2, const std::set<int>& params) {
    Tuple from = t1, to = t2;
    for (int p : params) {
        from.push_back(p);
        to.push_back(p);
    }
    auto pins = pins_from_tuples(from, to);
    if (!pins) return false;
    return pinned_isomorphism(A, A, *pins).has_value();
}

// --- catalog helpers -----------------------------------------------------

inline FiniteStructure digraph(int edge_mask, int m = 2, std::string name = {}) {
    FiniteStructure A;
    A.domain_size = m;
    A.name = name.empty() ? "digraph" + std::to_string(edge_mask) : std::move(name);
    std::set<Tuple> rows;
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y)
            if (edge_mask >> (x * m + y) & 1) rows.insert({x, y});
    A.add_relation("E", 2, std::move(rows));
    return A;
}

inline FiniteStructure pure_set(int m) {
    FiniteStructure A;
    A.domain_size = m;
    A.name = "pure" + std::to_string(m);
    return A;
}

inline FiniteStructure g1() { return digraph(0b1010, 2, "G1"); }  // E = {(0,1),(1,1)}
inline FiniteStructure g2() { return digraph(0b0101, 2, "G2"); }  // E = {(0,0),(1,0)}

// One representative per isomorphism class of 2-element digraphs, least edge mask first.
inline std::vector<FiniteStructure> digraph_catalog() {
    std::vector<FiniteStructure> reps;
    for (int mask = 0; mask < 16; ++mask) {
        auto A = digraph(mask);
        bool fresh = std::none_of(reps.begin(), reps.end(),
                                  [&](const FiniteStructure& B) { return pinned_isomorphism(A, B).has_value(); });
        if (fresh) reps.push_back(std::move(A));
    }
    return reps;
}

}  // namespace cyl
