#pragma once

#include "error.hpp"
#include "space.hpp"

#include <fstream>
#include <sstream>
#include <string>

namespace cyl {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace detail {

// Reads "{p,...}{p,...}" groups from text starting at pos.
inline std::vector<std::vector<int>> read_groups(const std::string& text, std::size_t pos, int lineno) {
    std::vector<std::vector<int>> out;
    while (pos < text.size()) {
        char c = text[pos];
        if (std::isspace((unsigned char)c)) {
            ++pos;
            continue;
        }
        if (c != '{') throw parse_error("expected '{'", lineno, (int)pos + 1);
        auto close = text.find('}', pos);
        if (close == std::string::npos) throw parse_error("unterminated '{'", lineno, (int)pos + 1);
        std::vector<int> g;
        std::string body = text.substr(pos + 1, close - pos - 1);
        std::stringstream ss(body);
        for (std::string item; std::getline(ss, item, ',');) {
            auto a = item.find_first_not_of(" \t"), b = item.find_last_not_of(" \t");
            if (a == std::string::npos) {
                if (body.find_first_not_of(" \t") == std::string::npos) break;
                throw parse_error("empty element", lineno, (int)pos + 1);
            }
            item = item.substr(a, b - a + 1);
            std::size_t used = 0;
            int v = 0;
            try { v = std::stoi(item, &used); } catch (...) { used = 0; }
            if (used != item.size()) throw parse_error("expected a point index, got '" + item + "'", lineno, (int)pos + 2);
            g.push_back(v);
        }
        out.push_back(std::move(g));
        pos = close + 1;
    }
    return out;
}

inline std::string format_group(const PointSet& s) { return s.str(); }

}  // namespace detail

// Explicit-space text format:
//   points <N> / dim <n> / eq <i>: {..}{..} / diag <i> <j>: {..} / basis: {..} {..} / end
// Omitted diagonals are the full set.
inline CylSpace parse_space(const std::string& text, std::string name = {}) {
    CylSpace S;
    S.name = std::move(name);
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    bool have_points = false, have_dim = false, have_basis = false, ended = false;
    std::vector<bool> have_eq;
    while (std::getline(in, raw)) {
        ++lineno;
        auto line = raw.substr(0, raw.find('#'));
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (ended) throw parse_error("content after 'end'", lineno, 1);
        std::istringstream ls(line);
        std::string word;
        ls >> word;
        auto need = [&](bool ok, const std::string& msg) {
            if (!ok) throw parse_error(msg, lineno, 1);
        };
        auto read_int = [&](const std::string& what) {
            int v;
            need((bool)(ls >> v), "expected " + what);
            return v;
        };
        auto in_range = [&](int p) { need(p >= 0 && p < S.points, "point " + std::to_string(p) + " out of range"); };
        auto to_set = [&](const std::vector<int>& g) {
            PointSet s(S.points);
            for (int p : g) {
                in_range(p);
                s.insert(p);
            }
            return s;
        };
        auto rest = [&](std::size_t from) {
            auto colon = line.find(':', from);
            need(colon != std::string::npos, "expected ':'");
            return colon + 1;
        };
        if (word == "points") {
            S.points = read_int("point count");
            need(S.points >= 1, "point count must be positive");
            have_points = true;
        } else if (word == "dim") {
            need(have_points, "'dim' before 'points'");
            S.dim = read_int("dimension");
            need(S.dim >= 1 && S.dim <= 16, "dimension must be in 1..16");
            have_dim = true;
            have_eq.assign(S.dim, false);
            S.eq.assign(S.dim, Partition::single(S.points));
            S.diag.assign(S.dim * S.dim, PointSet::full(S.points));
        } else if (word == "eq") {
            need(have_dim, "'eq' before 'dim'");
            std::string idx;
            ls >> idx;
            if (!idx.empty() && idx.back() == ':') idx.pop_back();
            int i = -1;
            try { i = std::stoi(idx); } catch (...) {}
            need(i >= 0 && i < S.dim, "eq index out of range");
            auto groups = detail::read_groups(line, rest(0), lineno);
            std::vector<int> lab(S.points, -1);
            for (size_t b = 0; b < groups.size(); ++b)
                for (int p : groups[b]) {
                    in_range(p);
                    need(lab[p] < 0, "point " + std::to_string(p) + " in two blocks of eq " + std::to_string(i));
                    lab[p] = (int)b;
                }
            for (int p = 0; p < S.points; ++p) need(lab[p] >= 0, "eq " + std::to_string(i) + " misses point " + std::to_string(p));
            S.eq[i] = Partition::from_labels(lab);
            have_eq[i] = true;
        } else if (word == "diag") {
            need(have_dim, "'diag' before 'dim'");
            int i = read_int("index"), j = -1;
            std::string js;
            ls >> js;
            if (!js.empty() && js.back() == ':') js.pop_back();
            try { j = std::stoi(js); } catch (...) {}
            need(i >= 0 && j >= 0 && i < S.dim && j < S.dim && i != j, "diag indices invalid");
            auto groups = detail::read_groups(line, rest(0), lineno);
            need(groups.size() == 1, "diag takes exactly one set");
            S.diag[i * S.dim + j] = S.diag[j * S.dim + i] = to_set(groups[0]);
        } else if (word == "basis:" || word == "basis") {
            need(have_dim, "'basis' before 'dim'");
            for (auto& g : detail::read_groups(line, rest(0), lineno)) S.basis.sets.push_back(to_set(g));
            have_basis = true;
        } else if (word == "end") {
            ended = true;
        } else {
            throw parse_error("unknown keyword '" + word + "'", lineno, 1);
        }
    }
    if (!ended) throw parse_error("missing 'end'", lineno + 1, 1);
    if (!have_dim) throw parse_error("missing 'dim'", lineno, 1);
    for (int i = 0; i < S.dim; ++i)
        if (!have_eq[i]) throw parse_error("missing 'eq " + std::to_string(i) + "'", lineno, 1);
    if (!have_basis) throw parse_error("missing 'basis'; orbit-rule spaces are built from structure files", lineno, 1);
    S.basis.kind = Basis::Kind::Explicit;
    std::sort(S.basis.sets.begin(), S.basis.sets.end());
    S.basis.sets.erase(std::unique(S.basis.sets.begin(), S.basis.sets.end()), S.basis.sets.end());
    return S;
}

inline std::string format_space(const CylSpace& S) {
    std::string s = "points " + std::to_string(S.points) + "\ndim " + std::to_string(S.dim) + "\n";
    for (int i = 0; i < S.dim; ++i) {
        s += "eq " + std::to_string(i) + ":";
        for (int b = 0; b < S.eq[i].count(); ++b) s += " " + S.eq[i].block_set(b).str();
        s += "\n";
    }
    for (int i = 0; i < S.dim; ++i)
        for (int j = i + 1; j < S.dim; ++j)
            if (!(S.D(i, j) == S.all())) s += "diag " + std::to_string(i) + " " + std::to_string(j) + ": " + S.D(i, j).str() + "\n";
    if (S.is_explicit()) {
        s += "basis:";
        for (auto& v : S.basis.sets) s += " " + v.str();
        s += "\n";
    } else {
        s += "# basis: unions of automorphism orbits\n";
    }
    return s + "end\n";
}

// Same space with its basis listed.
inline CylSpace to_explicit(const CylSpace& S) {
    CylSpace E = S;
    if (S.is_explicit()) return E;
    if (S.basis.atoms.count() > 12) throw resource_error("too many orbits to list the basis");
    E.basis.sets = invariant_sets(S);
    std::sort(E.basis.sets.begin(), E.basis.sets.end());
    E.basis.kind = Basis::Kind::Explicit;
    E.basis.source.reset();
    return E;
}

}  // namespace cyl
