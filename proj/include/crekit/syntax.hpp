#pragma once

// Abstract syntax, parsing and rendering of regular expressions with
// numerical occurrence indicators E{l,u}.
//
// Concrete grammar:
//   expr  := alt
//   alt   := cat ("|" cat)*
//   cat   := rep+
//   rep   := atom count?
//   atom  := SYMBOL | "%" | "(" expr ")"
//   count := "{" INT "}" | "{" INT "," "}" | "{" INT "," INT "}" | "?" | "*" | "+"
//   SYMBOL := letter (letter | digit)*
// "%" is the empty word. Whitespace only separates adjacent symbols.

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "crekit/error.hpp"

namespace crekit {

/// Occurrence indicator {low,high}; an empty `high` means unbounded.
class CountRange {
public:
    CountRange(std::uint64_t low, std::optional<std::uint64_t> high)
        : low_(low), high_(high) {
        if (high_ && *high_ == 0)
            throw std::invalid_argument("count upper bound must be at least 1");
        if (high_ && low_ > *high_)
            throw std::invalid_argument("count lower bound exceeds upper bound");
    }

    static CountRange exactly(std::uint64_t n) { return {n, n}; }
    static CountRange at_least(std::uint64_t n) { return {n, std::nullopt}; }

    std::uint64_t low() const noexcept { return low_; }
    std::optional<std::uint64_t> high() const noexcept { return high_; }
    bool unbounded() const noexcept { return !high_.has_value(); }

    /// True when the body may be iterated more than once.
    bool iterates() const noexcept { return !high_ || *high_ >= 2; }

    friend bool operator==(const CountRange&, const CountRange&) = default;

private:
    std::uint64_t low_;
    std::optional<std::uint64_t> high_;
};

inline bool is_symbol_lexeme(std::string_view s) noexcept {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s.front())))
        return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)))
            return false;
    return true;
}

/// Immutable, shareable expression tree.
///
/// The factory functions keep two normal-form invariants: Concat and Alt are
/// flattened (never directly nested in a node of the same kind) and hold at
/// least two children, and repetition of the empty word collapses to the
/// empty word.
class Expr {
public:
    enum class Kind { Symbol, Epsilon, Concat, Alt, Rep };

    Expr() : Expr(epsilon()) {}

    static Expr symbol(std::string name);
    static Expr epsilon();
    /// Zero parts gives Epsilon, one part gives that part.
    static Expr concat(std::vector<Expr> parts);
    static Expr alt(std::vector<Expr> branches);
    static Expr rep(Expr inner, CountRange range);

    Kind kind() const noexcept;
    bool is(Kind k) const noexcept { return kind() == k; }

    const std::string& name() const;
    std::span<const Expr> children() const;
    const Expr& inner() const;
    const CountRange& range() const;

    friend bool operator==(const Expr& a, const Expr& b);

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    std::shared_ptr<const Node> node_;
};

struct Expr::Node {
    Kind kind;
    std::string name;
    std::vector<Expr> children; // Concat/Alt parts, or the single Rep body
    std::optional<CountRange> range;
};

inline Expr::Kind Expr::kind() const noexcept { return node_->kind; }

inline const std::string& Expr::name() const {
    if (kind() != Kind::Symbol)
        throw std::logic_error("Expr::name on a non-symbol node");
    return node_->name;
}

inline std::span<const Expr> Expr::children() const {
    if (kind() != Kind::Concat && kind() != Kind::Alt)
        throw std::logic_error("Expr::children on a non-list node");
    return node_->children;
}

inline const Expr& Expr::inner() const {
    if (kind() != Kind::Rep)
        throw std::logic_error("Expr::inner on a non-repetition node");
    return node_->children.front();
}

inline const CountRange& Expr::range() const {
    if (kind() != Kind::Rep)
        throw std::logic_error("Expr::range on a non-repetition node");
    return *node_->range;
}

inline Expr Expr::symbol(std::string name) {
    if (!is_symbol_lexeme(name))
        throw std::invalid_argument("invalid symbol identifier '" + name + "'");
    return Expr(std::make_shared<const Node>(
        Node{Kind::Symbol, std::move(name), {}, std::nullopt}));
}

inline Expr Expr::epsilon() {
    static const Expr eps(
        std::make_shared<const Node>(Node{Kind::Epsilon, {}, {}, std::nullopt}));
    return eps;
}

namespace detail {

inline std::vector<Expr> flatten(std::vector<Expr> items, Expr::Kind kind) {
    std::vector<Expr> out;
    out.reserve(items.size());
    for (auto& item : items) {
        if (item.kind() == kind) {
            auto kids = item.children();
            out.insert(out.end(), kids.begin(), kids.end());
        } else {
            out.push_back(std::move(item));
        }
    }
    return out;
}

} // namespace detail

inline Expr Expr::concat(std::vector<Expr> parts) {
    parts = detail::flatten(std::move(parts), Kind::Concat);
    if (parts.empty())
        return epsilon();
    if (parts.size() == 1)
        return parts.front();
    return Expr(std::make_shared<const Node>(
        Node{Kind::Concat, {}, std::move(parts), std::nullopt}));
}

inline Expr Expr::alt(std::vector<Expr> branches) {
    if (branches.empty())
        throw std::invalid_argument("alternation needs at least one branch");
    branches = detail::flatten(std::move(branches), Kind::Alt);
    if (branches.size() == 1)
        return branches.front();
    return Expr(std::make_shared<const Node>(
        Node{Kind::Alt, {}, std::move(branches), std::nullopt}));
}

inline Expr Expr::rep(Expr inner, CountRange range) {
    if (inner.kind() == Kind::Epsilon)
        return inner;
    return Expr(std::make_shared<const Node>(
        Node{Kind::Rep, {}, {std::move(inner)}, range}));
}

inline bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_)
        return true;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    return x.kind == y.kind && x.name == y.name && x.range == y.range &&
           x.children == y.children;
}

/// Symbols in first-occurrence order.
class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> symbols) {
        for (auto& s : symbols)
            add(std::move(s));
    }

    /// Appends `s` if new; returns its index either way.
    std::size_t add(std::string s) {
        auto it = index_.find(s);
        if (it != index_.end())
            return it->second;
        index_.emplace(s, symbols_.size());
        symbols_.push_back(std::move(s));
        return symbols_.size() - 1;
    }

    std::optional<std::size_t> index_of(const std::string& s) const {
        auto it = index_.find(s);
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

    bool contains(const std::string& s) const { return index_.contains(s); }
    std::size_t size() const noexcept { return symbols_.size(); }
    bool empty() const noexcept { return symbols_.empty(); }
    const std::string& operator[](std::size_t i) const { return symbols_[i]; }
    const std::vector<std::string>& symbols() const noexcept { return symbols_; }

    friend bool operator==(const Alphabet& a, const Alphabet& b) {
        return a.symbols_ == b.symbols_;
    }

private:
    std::vector<std::string> symbols_;
    std::unordered_map<std::string, std::size_t> index_;
};

namespace detail {

inline void collect_symbols(const Expr& e, Alphabet& out) {
    switch (e.kind()) {
    case Expr::Kind::Symbol: out.add(e.name()); break;
    case Expr::Kind::Epsilon: break;
    case Expr::Kind::Concat:
    case Expr::Kind::Alt:
        for (const auto& c : e.children())
            collect_symbols(c, out);
        break;
    case Expr::Kind::Rep: collect_symbols(e.inner(), out); break;
    }
}

} // namespace detail

inline Alphabet alphabet_of(const Expr& e) {
    Alphabet out;
    detail::collect_symbols(e, out);
    return out;
}

/// Number of Symbol leaves.
inline std::size_t symbol_occurrences(const Expr& e) {
    switch (e.kind()) {
    case Expr::Kind::Symbol: return 1;
    case Expr::Kind::Epsilon: return 0;
    case Expr::Kind::Concat:
    case Expr::Kind::Alt: {
        std::size_t n = 0;
        for (const auto& c : e.children())
            n += symbol_occurrences(c);
        return n;
    }
    case Expr::Kind::Rep: return symbol_occurrences(e.inner());
    }
    return 0;
}

/// Total AST nodes, every kind counted once.
inline std::size_t node_count(const Expr& e) {
    switch (e.kind()) {
    case Expr::Kind::Symbol:
    case Expr::Kind::Epsilon: return 1;
    case Expr::Kind::Concat:
    case Expr::Kind::Alt: {
        std::size_t n = 1;
        for (const auto& c : e.children())
            n += node_count(c);
        return n;
    }
    case Expr::Kind::Rep: return 1 + node_count(e.inner());
    }
    return 0;
}

inline bool has_repetition(const Expr& e) {
    switch (e.kind()) {
    case Expr::Kind::Symbol:
    case Expr::Kind::Epsilon: return false;
    case Expr::Kind::Concat:
    case Expr::Kind::Alt:
        for (const auto& c : e.children())
            if (has_repetition(c))
                return true;
        return false;
    case Expr::Kind::Rep: return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr parse() {
        skip_space();
        if (at_end())
            throw SyntaxError(pos_, "empty expression");
        Expr e = parse_alt();
        skip_space();
        if (!at_end()) {
            if (peek() == ')')
                throw SyntaxError(pos_, "unbalanced ')'");
            throw SyntaxError(pos_, std::string("unexpected '") + peek() + "'");
        }
        return e;
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    void skip_space() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek())))
            ++pos_;
    }

    bool starts_atom() {
        skip_space();
        if (at_end())
            return false;
        char c = peek();
        return c == '(' || c == '%' || std::isalpha(static_cast<unsigned char>(c));
    }

    Expr parse_alt() {
        std::vector<Expr> branches;
        branches.push_back(parse_cat());
        skip_space();
        while (!at_end() && peek() == '|') {
            ++pos_;
            branches.push_back(parse_cat());
            skip_space();
        }
        return Expr::alt(std::move(branches));
    }

    Expr parse_cat() {
        std::vector<Expr> parts;
        while (starts_atom())
            parts.push_back(parse_rep());
        if (parts.empty()) {
            if (at_end())
                throw SyntaxError(pos_, "expected an atom, found end of input");
            throw SyntaxError(pos_, std::string("expected an atom, found '") +
                                        peek() + "'");
        }
        return Expr::concat(std::move(parts));
    }

    Expr parse_rep() {
        Expr atom = parse_atom();
        skip_space();
        if (at_end())
            return atom;
        std::optional<CountRange> range;
        switch (peek()) {
        case '?': ++pos_; range = CountRange(0, 1); break;
        case '*': ++pos_; range = CountRange::at_least(0); break;
        case '+': ++pos_; range = CountRange::at_least(1); break;
        case '{': range = parse_braces(); break;
        default: return atom;
        }
        skip_space();
        if (!at_end() && (peek() == '?' || peek() == '*' || peek() == '+' || peek() == '{'))
            throw SyntaxError(pos_, "a second count must be parenthesized");
        return Expr::rep(std::move(atom), *range);
    }

    CountRange parse_braces() {
        std::size_t open = pos_;
        ++pos_; // '{'
        std::uint64_t low = parse_int();
        skip_space();
        std::optional<std::uint64_t> high = low;
        if (!at_end() && peek() == ',') {
            ++pos_;
            skip_space();
            if (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
                high = parse_int();
            else
                high = std::nullopt;
        }
        skip_space();
        if (at_end() || peek() != '}')
            throw SyntaxError(pos_, "expected '}'");
        ++pos_;
        if (high && *high == 0)
            throw InvalidCount(open, "count {0,0} denotes no repetition");
        if (high && low > *high)
            throw InvalidCount(open, "count lower bound " + std::to_string(low) +
                                         " exceeds upper bound " +
                                         std::to_string(*high));
        return CountRange(low, high);
    }

    std::uint64_t parse_int() {
        skip_space();
        std::size_t start = pos_;
        std::uint64_t value = 0;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
            auto digit = static_cast<std::uint64_t>(peek() - '0');
            if (value > (UINT64_MAX - digit) / 10)
                throw InvalidCount(start, "count does not fit in 64 bits");
            value = value * 10 + digit;
            ++pos_;
        }
        if (pos_ == start)
            throw SyntaxError(pos_, "expected a decimal count");
        return value;
    }

    Expr parse_atom() {
        skip_space();
        char c = peek();
        if (c == '%') {
            ++pos_;
            return Expr::epsilon();
        }
        if (c == '(') {
            std::size_t open = pos_;
            ++pos_;
            skip_space();
            if (at_end())
                throw SyntaxError(open, "unbalanced '('");
            Expr e = parse_alt();
            skip_space();
            if (at_end() || peek() != ')')
                throw SyntaxError(at_end() ? open : pos_,
                                  at_end() ? "unbalanced '('" : "expected ')'");
            ++pos_;
            return e;
        }
        std::size_t start = pos_;
        while (!at_end() && std::isalnum(static_cast<unsigned char>(peek())))
            ++pos_;
        return Expr::symbol(std::string(text_.substr(start, pos_ - start)));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Parses one expression; throws SyntaxError or InvalidCount.
inline Expr parse_expr(std::string_view text) { return detail::Parser(text).parse(); }

// ---------------------------------------------------------------------------
// Rendering

inline std::string render_count(const CountRange& r) {
    std::string s = "{" + std::to_string(r.low()) + ",";
    if (r.high())
        s += std::to_string(*r.high());
    return s + "}";
}

namespace detail {

inline void append_piece(std::string& out, const std::string& piece) {
    // Two adjacent symbols would otherwise lex as one.
    if (!out.empty() && !piece.empty() &&
        std::isalnum(static_cast<unsigned char>(out.back())) &&
        std::isalpha(static_cast<unsigned char>(piece.front())))
        out += ' ';
    out += piece;
}

} // namespace detail

/// Canonical text: alternations always parenthesized, counts always in
/// {l,u} / {l,} form. The output re-parses to an equal tree.
inline std::string render_expr(const Expr& e) {
    switch (e.kind()) {
    case Expr::Kind::Symbol: return e.name();
    case Expr::Kind::Epsilon: return "%";
    case Expr::Kind::Concat: {
        std::string out;
        for (const auto& c : e.children())
            detail::append_piece(out, render_expr(c));
        return out;
    }
    case Expr::Kind::Alt: {
        std::string out = "(";
        bool first = true;
        for (const auto& c : e.children()) {
            if (!first)
                out += '|';
            out += render_expr(c);
            first = false;
        }
        return out + ")";
    }
    case Expr::Kind::Rep: {
        const Expr& body = e.inner();
        std::string inner = render_expr(body);
        if (body.is(Expr::Kind::Concat) || body.is(Expr::Kind::Rep))
            inner = "(" + inner + ")";
        return inner + render_count(e.range());
    }
    }
    return {};
}

} // namespace crekit
