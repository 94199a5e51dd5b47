#pragma once

// Weak (counter-blind) unambiguity: marking every symbol occurrence of the
// unexpanded expression as a position, no first set and no follow set may
// hold two positions with the same symbol. A counted body may always either
// iterate again (when its upper bound is at least 2) or exit, regardless of
// counter values.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "crekit/syntax.hpp"

namespace crekit {

/// Two same-symbol positions that a reader cannot tell apart.
struct AmbiguityConflict {
    std::string symbol;
    std::size_t first_position;  // 1-based, document order
    std::size_t second_position; // first_position < second_position
    /// Empty when the clash is in the first set, otherwise the position
    /// whose follow set holds both.
    std::optional<std::size_t> follow_of;

    friend bool operator==(const AmbiguityConflict&, const AmbiguityConflict&) = default;
};

struct UnambiguityVerdict {
    bool unambiguous = true;
    std::optional<AmbiguityConflict> conflict;
};

/// Every symbol of the alphabet occurs exactly once.
inline bool is_single_occurrence(const Expr& e) {
    return symbol_occurrences(e) == alphabet_of(e).size();
}

/// First/last/follow sets over the marked positions of an expression.
struct PositionSets {
    std::vector<std::string> symbols; // symbols[p - 1] is position p's symbol
    bool nullable = false;
    std::vector<std::size_t> first;
    std::vector<std::size_t> last;
    std::vector<std::vector<std::size_t>> follow; // follow[p], index 0 unused
};

namespace detail {

class PositionAnalysis {
public:
    struct Info {
        bool nullable;
        std::vector<std::size_t> first, last;
    };

    Info visit(const Expr& e) {
        using K = Expr::Kind;
        switch (e.kind()) {
        case K::Symbol: {
            sets_.symbols.push_back(e.name());
            sets_.follow.emplace_back();
            std::size_t p = sets_.symbols.size();
            return {false, {p}, {p}};
        }
        case K::Epsilon: return {true, {}, {}};
        case K::Concat: {
            auto kids = e.children();
            Info acc = visit(kids.front());
            for (std::size_t i = 1; i < kids.size(); ++i) {
                Info next = visit(kids[i]);
                link(acc.last, next.first);
                if (acc.nullable)
                    acc.first.insert(acc.first.end(), next.first.begin(), next.first.end());
                if (next.nullable)
                    acc.last.insert(acc.last.end(), next.last.begin(), next.last.end());
                else
                    acc.last = std::move(next.last);
                acc.nullable = acc.nullable && next.nullable;
            }
            return acc;
        }
        case K::Alt: {
            Info acc{false, {}, {}};
            for (const auto& c : e.children()) {
                Info next = visit(c);
                acc.nullable = acc.nullable || next.nullable;
                acc.first.insert(acc.first.end(), next.first.begin(), next.first.end());
                acc.last.insert(acc.last.end(), next.last.begin(), next.last.end());
            }
            return acc;
        }
        case K::Rep: {
            Info body = visit(e.inner());
            if (e.range().iterates())
                link(body.last, body.first);
            body.nullable = body.nullable || e.range().low() == 0;
            return body;
        }
        }
        return {};
    }

    PositionSets finish(Info root) {
        sets_.nullable = root.nullable;
        sets_.first = std::move(root.first);
        sets_.last = std::move(root.last);
        for (auto& f : sets_.follow) {
            std::sort(f.begin(), f.end());
            f.erase(std::unique(f.begin(), f.end()), f.end());
        }
        return std::move(sets_);
    }

    PositionAnalysis() { sets_.follow.emplace_back(); }

private:
    void link(const std::vector<std::size_t>& from, const std::vector<std::size_t>& to) {
        for (std::size_t p : from)
            sets_.follow[p].insert(sets_.follow[p].end(), to.begin(), to.end());
    }

    PositionSets sets_;
};

// Smallest pair (i, j), i < j, of positions in `set` carrying one symbol.
inline std::optional<std::pair<std::size_t, std::size_t>>
first_clash(const std::vector<std::size_t>& set, const std::vector<std::string>& symbols) {
    std::unordered_map<std::string, std::size_t> seen;
    std::optional<std::pair<std::size_t, std::size_t>> best;
    for (std::size_t p : set) {
        auto [it, fresh] = seen.emplace(symbols[p - 1], p);
        if (!fresh) {
            std::pair<std::size_t, std::size_t> cand{it->second, p};
            if (!best || cand < *best)
                best = cand;
        }
    }
    return best;
}

} // namespace detail

/// Positions are numbered on the expression as given, without expansion.
inline PositionSets position_sets(const Expr& e) {
    detail::PositionAnalysis analysis;
    auto root = analysis.visit(e);
    return analysis.finish(std::move(root));
}

/// Single-occurrence expressions are accepted without further analysis.
/// Otherwise reports the first clash: the first set is inspected before the
/// follow sets, which go in position order.
inline UnambiguityVerdict check_unambiguous(const Expr& e) {
    if (is_single_occurrence(e))
        return {};
    PositionSets sets = position_sets(e);
    std::vector<std::size_t> first = sets.first;
    std::sort(first.begin(), first.end());
    if (auto clash = detail::first_clash(first, sets.symbols))
        return {false, AmbiguityConflict{sets.symbols[clash->first - 1], clash->first,
                                         clash->second, std::nullopt}};
    for (std::size_t p = 1; p < sets.follow.size(); ++p)
        if (auto clash = detail::first_clash(sets.follow[p], sets.symbols))
            return {false, AmbiguityConflict{sets.symbols[clash->first - 1], clash->first,
                                             clash->second, p}};
    return {};
}

inline std::string describe(const AmbiguityConflict& c) {
    std::string where = c.follow_of ? "follow set of position " + std::to_string(*c.follow_of)
                                    : std::string("first set");
    return "symbol " + c.symbol + " at positions " + std::to_string(c.first_position) +
           " and " + std::to_string(c.second_position) + " in the " + where;
}

} // namespace crekit
