#pragma once

#include "error.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace cyl {

struct Signature {
    std::vector<std::pair<std::string, int>> relations;

    std::optional<int> arity(std::string_view name) const {
        for (auto& [r, k] : relations)
            if (r == name) return k;
        return std::nullopt;
    }
    void add(std::string name, int arity) {
        if (arity < 1) throw error("relation " + name + ": arity must be positive");
        if (this->arity(name)) throw error("relation " + name + " declared twice");
        relations.emplace_back(std::move(name), arity);
    }
    bool operator==(const Signature&) const = default;
};

class Formula;

namespace node {
struct Atomic { std::string rel; std::vector<int> args; };
struct Equal { int lhs, rhs; };
struct Not;
struct And;
struct Exists;
}  // namespace node

// Immutable first-order formula over {atom, =, !, &, exists}. Children are shared.
class Formula {
public:
    struct Node;

    Formula() = default;

    static Formula atomic(std::string rel, std::vector<int> args);
    static Formula equal(int i, int j);
    static Formula negate(Formula f);
    static Formula conj(Formula a, Formula b);
    static Formula exists(int var, Formula body);

    // Derived connectives, desugared on construction.
    static Formula disj(Formula a, Formula b) { return negate(conj(negate(std::move(a)), negate(std::move(b)))); }
    static Formula implies(Formula a, Formula b) { return negate(conj(std::move(a), negate(std::move(b)))); }
    static Formula forall(int var, Formula body) { return negate(exists(var, negate(std::move(body)))); }

    enum class Kind { Atomic, Equal, Not, And, Exists };

    Kind kind() const;
    const std::string& rel() const;
    const std::vector<int>& args() const;
    int lhs_var() const;   // Equal
    int rhs_var() const;   // Equal
    int bound_var() const; // Exists
    const Formula& sub() const;    // Not, Exists
    const Formula& left() const;   // And
    const Formula& right() const;  // And

    bool empty() const { return !p_; }
    friend bool operator==(const Formula& a, const Formula& b);

private:
    std::shared_ptr<const Node> p_;
};

struct Formula::Node {
    Kind kind;
    std::string rel;
    std::vector<int> vars;  // atom arguments, equality sides, or the bound variable
    Formula a, b;
};

inline Formula Formula::atomic(std::string rel, std::vector<int> args) {
    Formula f;
    f.p_ = std::make_shared<Node>(Node{Kind::Atomic, std::move(rel), std::move(args), {}, {}});
    return f;
}
inline Formula Formula::equal(int i, int j) {
    Formula f;
    f.p_ = std::make_shared<Node>(Node{Kind::Equal, {}, {i, j}, {}, {}});
    return f;
}
inline Formula Formula::negate(Formula g) {
    Formula f;
    f.p_ = std::make_shared<Node>(Node{Kind::Not, {}, {}, std::move(g), {}});
    return f;
}
inline Formula Formula::conj(Formula x, Formula y) {
    Formula f;
    f.p_ = std::make_shared<Node>(Node{Kind::And, {}, {}, std::move(x), std::move(y)});
    return f;
}
inline Formula Formula::exists(int var, Formula body) {
    Formula f;
    f.p_ = std::make_shared<Node>(Node{Kind::Exists, {}, {var}, std::move(body), {}});
    return f;
}

inline Formula::Kind Formula::kind() const { return p_->kind; }
inline const std::string& Formula::rel() const { return p_->rel; }
inline const std::vector<int>& Formula::args() const { return p_->vars; }
inline int Formula::lhs_var() const { return p_->vars[0]; }
inline int Formula::rhs_var() const { return p_->vars[1]; }
inline int Formula::bound_var() const { return p_->vars[0]; }
inline const Formula& Formula::sub() const { return p_->a; }
inline const Formula& Formula::left() const { return p_->a; }
inline const Formula& Formula::right() const { return p_->b; }

inline bool operator==(const Formula& x, const Formula& y) {
    if (x.p_ == y.p_) return true;
    if (!x.p_ || !y.p_) return false;
    const auto& a = *x.p_;
    const auto& b = *y.p_;
    return a.kind == b.kind && a.rel == b.rel && a.vars == b.vars && a.a == b.a && a.b == b.b;
}

inline std::set<int> free_vars(const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind()) {
    case K::Atomic: return {f.args().begin(), f.args().end()};
    case K::Equal: return {f.lhs_var(), f.rhs_var()};
    case K::Not: return free_vars(f.sub());
    case K::And: {
        auto s = free_vars(f.left());
        s.merge(free_vars(f.right()));
        return s;
    }
    case K::Exists: {
        auto s = free_vars(f.sub());
        s.erase(f.bound_var());
        return s;
    }
    }
    return {};
}

// Largest variable index occurring anywhere (free or bound), -1 if none.
inline int max_var(const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind()) {
    case K::Atomic: return f.args().empty() ? -1 : *std::max_element(f.args().begin(), f.args().end());
    case K::Equal: return std::max(f.lhs_var(), f.rhs_var());
    case K::Not: return max_var(f.sub());
    case K::And: return std::max(max_var(f.left()), max_var(f.right()));
    case K::Exists: return std::max(f.bound_var(), max_var(f.sub()));
    }
    return -1;
}

// Replace free v_from by v_to, renaming bound variables that would capture v_to.
// Fresh names are the smallest indices below the budget not in use.
inline Formula substitute_var(const Formula& f, int from, int to, int budget) {
    using K = Formula::Kind;
    if (from == to) return f;
    auto swap_idx = [&](int v) { return v == from ? to : v; };
    switch (f.kind()) {
    case K::Atomic: {
        auto args = f.args();
        std::ranges::transform(args, args.begin(), swap_idx);
        return Formula::atomic(f.rel(), std::move(args));
    }
    case K::Equal: return Formula::equal(swap_idx(f.lhs_var()), swap_idx(f.rhs_var()));
    case K::Not: return Formula::negate(substitute_var(f.sub(), from, to, budget));
    case K::And:
        return Formula::conj(substitute_var(f.left(), from, to, budget),
                             substitute_var(f.right(), from, to, budget));
    case K::Exists: {
        int b = f.bound_var();
        auto fv = free_vars(f.sub());
        if (b == from || !fv.contains(from)) return f;
        if (b != to) return Formula::exists(b, substitute_var(f.sub(), from, to, budget));
        int k = 0;
        while (k < budget && (fv.contains(k) || k == from || k == to)) ++k;
        if (k >= budget)
            throw resource_error("fresh variable needed for capture-avoiding substitution; budget " +
                                 std::to_string(budget) + " exhausted (need " +
                                 std::to_string(std::max<int>(budget + 1, fv.size() + 2)) + ")");
        Formula body = substitute_var(f.sub(), b, k, budget);
        return Formula::exists(k, substitute_var(body, from, to, budget));
    }
    }
    return f;
}

// --- text form -----------------------------------------------------------

namespace detail {

struct Token {
    enum Type { Ident, Var, LParen, RParen, Comma, Bang, Amp, Bar, Arrow, Eq, End } type;
    std::string text;
    int value = 0;
    int line = 1, col = 1;
};

inline std::vector<Token> tokenize(std::string_view s) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto adv = [&](size_t k) {
        for (size_t t = 0; t < k; ++t, ++i) {
            if (s[i] == '\n') { ++line; col = 1; } else ++col;
        }
    };
    while (i < s.size()) {
        unsigned char c = s[i];
        if (std::isspace(c)) { adv(1); continue; }
        Token t{Token::End, {}, 0, line, col};
        if (std::isalpha(c) || c == '_') {
            size_t j = i;
            while (j < s.size() && (std::isalnum((unsigned char)s[j]) || s[j] == '_')) ++j;
            t.text = std::string(s.substr(i, j - i));
            bool var = t.text.size() > 1 && t.text[0] == 'v' &&
                       std::all_of(t.text.begin() + 1, t.text.end(), [](char ch) { return std::isdigit((unsigned char)ch); });
            if (var) {
                if (t.text.size() > 8) throw parse_error("variable index too large", line, col);
                t.type = Token::Var;
                t.value = std::stoi(t.text.substr(1));
            } else {
                t.type = Token::Ident;
            }
            adv(j - i);
        } else if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
            t.type = Token::Arrow; t.text = "->"; adv(2);
        } else {
            switch (c) {
            case '(': t.type = Token::LParen; break;
            case ')': t.type = Token::RParen; break;
            case ',': t.type = Token::Comma; break;
            case '!': t.type = Token::Bang; break;
            case '&': t.type = Token::Amp; break;
            case '|': t.type = Token::Bar; break;
            case '=': t.type = Token::Eq; break;
            default: throw parse_error(std::string("unexpected character '") + char(c) + "'", line, col);
            }
            t.text = std::string(1, char(c));
            adv(1);
        }
        out.push_back(std::move(t));
    }
    out.push_back(Token{Token::End, "end of input", 0, line, col});
    return out;
}

class Parser {
public:
    Parser(std::string_view text, const Signature& sig) : toks_(tokenize(text)), sig_(sig) {}

    Formula run() {
        Formula f = implication();
        if (peek().type != Token::End) fail("unexpected '" + peek().text + "'");
        return f;
    }

private:
    std::vector<Token> toks_;
    const Signature& sig_;
    size_t pos_ = 0;

    const Token& peek() const { return toks_[pos_]; }
    const Token& take() { return toks_[pos_++]; }
    [[noreturn]] void fail(const std::string& msg, const Token* at = nullptr) const {
        const Token& t = at ? *at : peek();
        throw parse_error(msg, t.line, t.col);
    }
    const Token& expect(Token::Type ty, const char* what) {
        if (peek().type != ty) fail(std::string("expected ") + what + ", got '" + peek().text + "'");
        return take();
    }

    Formula implication() {
        Formula lhs = disjunction();
        if (peek().type == Token::Arrow) {
            take();
            return Formula::implies(lhs, implication());
        }
        return lhs;
    }
    Formula disjunction() {
        Formula f = conjunction();
        while (peek().type == Token::Bar) {
            take();
            f = Formula::disj(f, conjunction());
        }
        return f;
    }
    Formula conjunction() {
        Formula f = unary();
        while (peek().type == Token::Amp) {
            take();
            f = Formula::conj(f, unary());
        }
        return f;
    }
    Formula unary() {
        const Token& t = peek();
        if (t.type == Token::Bang) {
            take();
            return Formula::negate(unary());
        }
        if (t.type == Token::Ident && (t.text == "exists" || t.text == "forall")) {
            bool ex = t.text == "exists";
            take();
            int v = expect(Token::Var, "variable after quantifier").value;
            Formula body = implication();
            return ex ? Formula::exists(v, body) : Formula::forall(v, body);
        }
        return primary();
    }
    Formula primary() {
        const Token& t = peek();
        if (t.type == Token::LParen) {
            take();
            Formula f = implication();
            expect(Token::RParen, "')'");
            return f;
        }
        if (t.type == Token::Var) {
            int i = take().value;
            expect(Token::Eq, "'=' after variable");
            int j = expect(Token::Var, "variable after '='").value;
            return Formula::equal(i, j);
        }
        if (t.type == Token::Ident) {
            const Token& name = take();
            auto ar = sig_.arity(name.text);
            if (!ar) fail("unknown relation '" + name.text + "'", &name);
            expect(Token::LParen, "'(' after relation name");
            std::vector<int> args;
            args.push_back(expect(Token::Var, "variable").value);
            while (peek().type == Token::Comma) {
                take();
                args.push_back(expect(Token::Var, "variable").value);
            }
            expect(Token::RParen, "')'");
            if ((int)args.size() != *ar)
                fail("relation '" + name.text + "' has arity " + std::to_string(*ar) + ", got " +
                         std::to_string(args.size()) + " arguments",
                     &name);
            return Formula::atomic(name.text, std::move(args));
        }
        fail("expected a formula, got '" + t.text + "'");
    }
};

inline std::string var_name(int i) { return "v" + std::to_string(i); }

}  // namespace detail

inline Formula parse_formula(std::string_view text, const Signature& sig) {
    return detail::Parser(text, sig).run();
}

inline std::string render(const Formula& f) {
    using K = Formula::Kind;
    using detail::var_name;
    auto operand = [](const Formula& g) {
        std::string s = render(g);
        return g.kind() == K::Atomic || g.kind() == K::Not ? s : "(" + s + ")";
    };
    switch (f.kind()) {
    case K::Atomic: {
        std::string s = f.rel() + "(";
        for (size_t i = 0; i < f.args().size(); ++i) s += (i ? "," : "") + var_name(f.args()[i]);
        return s + ")";
    }
    case K::Equal: return var_name(f.lhs_var()) + " = " + var_name(f.rhs_var());
    case K::Not: return "!" + operand(f.sub());
    case K::And: return operand(f.left()) + " & " + operand(f.right());
    case K::Exists: return "exists " + var_name(f.bound_var()) + " " + render(f.sub());
    }
    return {};
}

}  // namespace cyl
