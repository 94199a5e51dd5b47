#pragma once

// Test-only helpers: a direct semantic matcher used as an oracle and a
// seeded random expression generator.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "crekit/crekit.hpp"

namespace crekit::testing {

// End offsets reachable after matching `e` against `w` from `start`,
// straight from the set semantics: L(E{l,u}) = union of L(E)^i, l <= i <= u.
// No automata, no expansion.
inline std::set<std::size_t> ends(const Expr& e, const Word& w, std::size_t start) {
    using K = Expr::Kind;
    switch (e.kind()) {
    case K::Symbol:
        if (start < w.size() && w[start] == e.name())
            return {start + 1};
        return {};
    case K::Epsilon: return {start};
    case K::Concat: {
        std::set<std::size_t> cur{start};
        for (const auto& part : e.children()) {
            std::set<std::size_t> next;
            for (auto p : cur)
                for (auto q : ends(part, w, p))
                    next.insert(q);
            cur = std::move(next);
        }
        return cur;
    }
    case K::Alt: {
        std::set<std::size_t> out;
        for (const auto& b : e.children())
            for (auto q : ends(b, w, start))
                out.insert(q);
        return out;
    }
    case K::Rep: {
        const auto& r = e.range();
        std::set<std::size_t> out;
        std::set<std::size_t> cur{start}; // ends after exactly i iterations
        if (r.low() == 0)
            out.insert(start);
        std::vector<std::set<std::size_t>> history{cur};
        for (std::uint64_t i = 1; !r.high() || i <= *r.high(); ++i) {
            std::set<std::size_t> next;
            for (auto p : cur)
                for (auto q : ends(e.inner(), w, p))
                    next.insert(q);
            if (i >= r.low())
                out.insert(next.begin(), next.end());
            if (next.empty())
                break;
            // The sequence of sets is eventually periodic; once it repeats a
            // set that was already collected (index >= low), nothing new can
            // appear.
            if (r.low() < history.size() &&
                std::find(history.begin() + static_cast<std::ptrdiff_t>(r.low()), history.end(),
                          next) != history.end())
                break;
            history.push_back(next);
            cur = std::move(next);
        }
        return out;
    }
    }
    return {};
}

inline bool oracle_member(const Expr& e, const Word& w) { return ends(e, w, 0).contains(w.size()); }

/// Every word over `sigma` of length <= max_len, length-then-lexicographic.
inline std::vector<Word> all_words(const std::vector<std::string>& sigma, std::size_t max_len) {
    std::vector<Word> out{{}};
    std::vector<Word> layer{{}};
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::vector<Word> next;
        for (const auto& w : layer)
            for (const auto& s : sigma) {
                Word x = w;
                x.push_back(s);
                next.push_back(std::move(x));
            }
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

struct GeneratorConfig {
    std::vector<std::string> symbols{"a", "b", "c"};
    int max_depth = 3;
    std::uint64_t max_count = 3;
    std::uint64_t max_expanded_nodes = 60;
};

class ExprGenerator {
public:
    explicit ExprGenerator(std::uint64_t seed, GeneratorConfig cfg = {})
        : rng_(seed), cfg_(std::move(cfg)) {}

    /// Draws until the expansion is within the configured size.
    Expr next() {
        while (true) {
            Expr e = draw(cfg_.max_depth);
            if (expanded_node_count(e) <= cfg_.max_expanded_nodes)
                return e;
        }
    }

    std::mt19937_64& rng() { return rng_; }

private:
    std::uint64_t pick(std::uint64_t lo, std::uint64_t hi) {
        return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng_);
    }

    CountRange draw_range() {
        switch (pick(0, 5)) {
        case 0: return CountRange(0, 1);
        case 1: return CountRange::at_least(0);
        case 2: return CountRange::at_least(1);
        case 3: return CountRange::at_least(pick(0, cfg_.max_count));
        default: {
            std::uint64_t low = pick(0, cfg_.max_count);
            std::uint64_t high = std::max<std::uint64_t>(1, low + pick(0, 2));
            return CountRange(low, high);
        }
        }
    }

    Expr leaf() {
        if (pick(0, 9) == 0)
            return Expr::epsilon();
        return Expr::symbol(cfg_.symbols[pick(0, cfg_.symbols.size() - 1)]);
    }

    Expr draw(int depth) {
        if (depth == 0)
            return leaf();
        switch (pick(0, 4)) {
        case 0: return leaf();
        case 1:
        case 2: {
            std::vector<Expr> parts;
            for (std::uint64_t i = 0, n = pick(2, 3); i < n; ++i)
                parts.push_back(draw(depth - 1));
            return Expr::concat(std::move(parts));
        }
        case 3: {
            std::vector<Expr> parts;
            for (std::uint64_t i = 0, n = pick(2, 3); i < n; ++i)
                parts.push_back(draw(depth - 1));
            return Expr::alt(std::move(parts));
        }
        default: return Expr::rep(draw(depth - 1), draw_range());
        }
    }

    std::mt19937_64 rng_;
    GeneratorConfig cfg_;
};

/// Every weight list with k items in [1, wmax] and an even total, in
/// lexicographic order.
inline std::vector<std::vector<std::uint64_t>> even_weight_lists(std::size_t k, std::uint64_t wmax) {
    std::vector<std::vector<std::uint64_t>> out;
    std::vector<std::uint64_t> w(k, 1);
    while (true) {
        std::uint64_t total = 0;
        for (auto x : w)
            total += x;
        if (total % 2 == 0)
            out.push_back(w);
        std::size_t i = k;
        while (i > 0 && w[i - 1] == wmax)
            w[--i] = 1;
        if (i == 0)
            break;
        ++w[i - 1];
    }
    return out;
}

/// Subset sums by enumerating all 2^k masks.
inline std::set<std::uint64_t> subset_sums_by_mask(const std::vector<std::uint64_t>& w) {
    std::set<std::uint64_t> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << w.size()); ++mask) {
        std::uint64_t s = 0;
        for (std::size_t i = 0; i < w.size(); ++i)
            if (mask >> i & 1)
                s += w[i];
        out.insert(s);
    }
    return out;
}

inline Word word(std::string_view text) { return parse_word(text); }

} // namespace crekit::testing
