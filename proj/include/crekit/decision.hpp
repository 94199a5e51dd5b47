#pragma once

// Inclusion, overlap and equivalence of #RE languages, with shortest
// (then lexicographically least) counterexample or common-word witnesses.
//
// Both sides are read over the union alphabet: the symbols of the left
// expression in first-occurrence order, followed by symbols that only the
// right expression uses.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "crekit/engine.hpp"
#include "crekit/error.hpp"
#include "crekit/syntax.hpp"

namespace crekit {

struct InclusionVerdict {
    bool holds = true;
    /// Present iff !holds; a shortest word of L(left) \ L(right).
    std::optional<Word> witness;
    /// Only set by includes_reference: `holds` was established for words up
    /// to the length bound only.
    bool bounded = false;
};

struct OverlapVerdict {
    bool overlaps = false;
    /// Present iff overlaps; a shortest word of L(left) and L(right).
    std::optional<Word> witness;
};

enum class Side { Left, Right };

struct EquivalenceVerdict {
    bool equivalent = true;
    std::optional<Word> witness;
    /// The expression whose language contains the witness.
    std::optional<Side> side;
};

inline Alphabet union_alphabet(const Expr& left, const Expr& right) {
    Alphabet sigma = alphabet_of(left);
    Alphabet extra = alphabet_of(right);
    for (const auto& s : extra.symbols())
        sigma.add(s);
    return sigma;
}

namespace detail {

struct AutomatonPair {
    Alphabet sigma;
    Nfa left;
    Nfa right;
};

inline AutomatonPair compile_pair(const Expr& left, const Expr& right, const Limits& limits) {
    Alphabet sigma = union_alphabet(left, right);
    Nfa l = glushkov(expand(left, limits.expansion_cap)).relabeled(sigma);
    Nfa r = glushkov(expand(right, limits.expansion_cap)).relabeled(sigma);
    return {std::move(sigma), std::move(l), std::move(r)};
}

struct VectorHash {
    std::size_t operator()(const std::vector<StateId>& v) const noexcept {
        std::uint64_t h = 1469598103934665603ull;
        for (StateId x : v) {
            h ^= x;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

/// Subset automaton of an Nfa, built on demand.
class LazyDfa {
public:
    explicit LazyDfa(const Nfa& nfa) : nfa_(nfa), stepper_(nfa) {
        intern({nfa.initial()});
    }

    std::uint32_t initial() const { return 0; }
    bool accepting(std::uint32_t d) const { return accepting_[d]; }
    std::size_t size() const { return subsets_.size(); }

    std::uint32_t next(std::uint32_t d, SymbolId a) {
        if (delta_[d].empty()) {
            stepper_.step(subsets_[d], scratch_);
            std::vector<std::uint32_t> row(nfa_.alphabet().size());
            for (SymbolId s = 0; s < row.size(); ++s)
                row[s] = intern(std::move(scratch_[s]));
            delta_[d] = std::move(row);
        }
        return delta_[d][a];
    }

private:
    std::uint32_t intern(std::vector<StateId> subset) {
        auto it = index_.find(subset);
        if (it != index_.end())
            return it->second;
        auto id = static_cast<std::uint32_t>(subsets_.size());
        accepting_.push_back(stepper_.any_accepting(subset));
        index_.emplace(subset, id);
        subsets_.push_back(std::move(subset));
        delta_.emplace_back();
        return id;
    }

    const Nfa& nfa_;
    SubsetStepper stepper_;
    std::vector<std::vector<StateId>> subsets_;
    std::vector<bool> accepting_;
    std::vector<std::vector<std::uint32_t>> delta_;
    std::unordered_map<std::vector<StateId>, std::uint32_t, VectorHash> index_;
    std::vector<std::vector<StateId>> scratch_;
};

// Targets of an NFA state grouped by symbol, in symbol order.
inline std::vector<std::vector<StateId>> moves_by_symbol(const Nfa& nfa, StateId p) {
    std::vector<std::vector<StateId>> out(nfa.alphabet().size());
    for (StateId q : nfa.successors(p))
        out[nfa.label(q)].push_back(q);
    return out;
}

/// Length-lexicographically least word labelling a path from node 0 to a
/// target node in an implicit graph whose nodes are 64-bit keys.
/// `expand(node, emit)` must call emit(symbol, next) for every edge.
/// Throws StateBudgetExceeded once `budget` nodes have been discovered.
template <class Expand, class Target>
std::optional<std::vector<SymbolId>> least_path(std::uint64_t start, Expand expand, Target target,
                                                std::size_t budget) {
    // Breadth-first by level up to the first level holding a target.
    std::vector<std::uint64_t> nodes{start};
    std::unordered_map<std::uint64_t, std::uint32_t> index{{start, 0}};
    std::vector<std::uint32_t> level_start{0};
    std::size_t depth = 0;
    for (;; ++depth) {
        std::uint32_t begin = level_start[depth];
        auto end = static_cast<std::uint32_t>(nodes.size());
        if (begin == end)
            return std::nullopt;
        bool hit = false;
        for (std::uint32_t i = begin; i < end && !hit; ++i)
            hit = target(nodes[i]);
        level_start.push_back(end);
        if (hit)
            break;
        for (std::uint32_t i = begin; i < end; ++i)
            expand(nodes[i], [&](SymbolId, std::uint64_t next) {
                if (index.find(next) != index.end())
                    return;
                if (nodes.size() >= budget)
                    throw StateBudgetExceeded(budget);
                index.emplace(next, static_cast<std::uint32_t>(nodes.size()));
                nodes.push_back(next);
            });
    }

    // A node is useful when it lies on a shortest path to a target. Any
    // edge into an earlier level cannot be on one.
    auto in_level = [&](std::uint32_t j, std::size_t lvl) {
        return j >= level_start[lvl] && j < level_start[lvl + 1];
    };
    std::vector<bool> useful(nodes.size(), false);
    for (std::uint32_t i = level_start[depth]; i < level_start[depth + 1]; ++i)
        useful[i] = target(nodes[i]);
    for (std::size_t lvl = depth; lvl-- > 0;)
        for (std::uint32_t i = level_start[lvl]; i < level_start[lvl + 1]; ++i)
            expand(nodes[i], [&](SymbolId, std::uint64_t next) {
                auto it = index.find(next);
                if (it != index.end() && in_level(it->second, lvl + 1) && useful[it->second])
                    useful[i] = true;
            });

    // Greedy walk: always take the least symbol that keeps a useful node.
    std::vector<SymbolId> word;
    std::vector<std::uint32_t> current{0};
    for (std::size_t lvl = 0; lvl < depth; ++lvl) {
        std::map<SymbolId, std::vector<std::uint32_t>> by_symbol;
        for (std::uint32_t i : current)
            expand(nodes[i], [&](SymbolId a, std::uint64_t next) {
                auto it = index.find(next);
                if (it != index.end() && in_level(it->second, lvl + 1) && useful[it->second])
                    by_symbol[a].push_back(it->second);
            });
        auto& [a, next] = *by_symbol.begin();
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        word.push_back(a);
        current = std::move(next);
    }
    return word;
}

inline Word spell(const std::vector<SymbolId>& ids, const Alphabet& sigma) {
    Word w;
    w.reserve(ids.size());
    for (SymbolId a : ids)
        w.push_back(sigma[a]);
    return w;
}

inline std::uint64_t pair_key(std::uint32_t hi, std::uint32_t lo) {
    return (std::uint64_t{hi} << 32) | lo;
}

inline InclusionVerdict search_inclusion(const AutomatonPair& pair, const Limits& limits) {
    const Nfa& left = pair.left;
    LazyDfa right(pair.right);
    auto expand = [&](std::uint64_t node, auto&& emit) {
        auto x = static_cast<StateId>(node);
        auto d = static_cast<std::uint32_t>(node >> 32);
        auto moves = moves_by_symbol(left, x);
        for (SymbolId a = 0; a < moves.size(); ++a) {
            if (moves[a].empty())
                continue;
            std::uint32_t d2 = right.next(d, a);
            for (StateId x2 : moves[a])
                emit(a, pair_key(d2, x2));
        }
    };
    auto target = [&](std::uint64_t node) {
        return left.accepting(static_cast<StateId>(node)) &&
               !right.accepting(static_cast<std::uint32_t>(node >> 32));
    };
    auto path = least_path(pair_key(right.initial(), left.initial()), expand, target,
                           limits.state_budget);
    if (!path)
        return {true, std::nullopt, false};
    return {false, spell(*path, pair.sigma), false};
}

} // namespace detail

/// Decides L(left) ⊆ L(right) on the product of left's position automaton
/// with the lazily determinized right automaton. Throws StateBudgetExceeded
/// once more than limits.state_budget product states are created.
inline InclusionVerdict includes(const Expr& left, const Expr& right, const Limits& limits = {}) {
    return detail::search_inclusion(detail::compile_pair(left, right, limits), limits);
}

/// Number of subset states reachable in the determinization of glushkov(expand(e)).
inline std::size_t determinized_size(const Expr& e, const Limits& limits = {}) {
    Nfa nfa = glushkov(expand(e, limits.expansion_cap));
    detail::LazyDfa dfa(nfa);
    for (std::uint32_t d = 0; d < dfa.size(); ++d) {
        for (SymbolId a = 0; a < nfa.alphabet().size(); ++a)
            dfa.next(d, a);
        if (dfa.size() > limits.state_budget)
            throw StateBudgetExceeded(limits.state_budget);
    }
    return dfa.size();
}

/// Length bound that makes includes_reference complete: any shortest
/// counterexample is shorter than (left states) x (right subset states).
inline std::uint64_t complete_length_bound(const Expr& left, const Expr& right,
                                           const Limits& limits = {}) {
    auto left_states = glushkov(expand(left, limits.expansion_cap)).state_count();
    return detail::sat_mul(left_states, determinized_size(right, limits)) - 1;
}

/// Inclusion by brute force: walks L(left) up to `len_bound` in length-
/// lexicographic order over the union alphabet and tests each word against
/// right. The verdict is marked `bounded` when a passing result does not
/// cover every length that matters, i.e. L(left) has longer words and
/// `len_bound` is below complete_length_bound.
inline InclusionVerdict includes_reference(const Expr& left, const Expr& right,
                                           std::size_t len_bound, const Limits& limits = {}) {
    Alphabet sigma = union_alphabet(left, right);
    Nfa l = glushkov(expand(left, limits.expansion_cap)).relabeled(sigma);
    CompiledExpr r(right, limits);

    std::optional<Word> witness;
    for_each_word(l, len_bound, limits.word_limit, [&](const std::vector<SymbolId>& ids) {
        Word w;
        w.reserve(ids.size());
        for (SymbolId a : ids)
            w.push_back(sigma[a]);
        if (r.member(w))
            return true;
        witness = std::move(w);
        return false;
    });
    if (witness)
        return {false, std::move(witness), false};

    bool complete = !length_set(left, len_bound).saturated ||
                    len_bound >= complete_length_bound(left, right, limits);
    return {true, std::nullopt, !complete};
}

/// Decides L(left) ∩ L(right) ≠ ∅ by breadth-first search on the product of
/// the two position automata. Throws StateBudgetExceeded like includes.
inline OverlapVerdict overlaps(const Expr& left, const Expr& right, const Limits& limits = {}) {
    auto pair = detail::compile_pair(left, right, limits);
    const Nfa& l = pair.left;
    const Nfa& r = pair.right;

    auto expand = [&](std::uint64_t node, auto&& emit) {
        auto lm = detail::moves_by_symbol(l, static_cast<StateId>(node >> 32));
        auto rm = detail::moves_by_symbol(r, static_cast<StateId>(node));
        for (SymbolId a = 0; a < lm.size(); ++a)
            for (StateId x2 : lm[a])
                for (StateId y2 : rm[a])
                    emit(a, detail::pair_key(x2, y2));
    };
    auto target = [&](std::uint64_t node) {
        return l.accepting(static_cast<StateId>(node >> 32)) &&
               r.accepting(static_cast<StateId>(node));
    };
    auto path = detail::least_path(detail::pair_key(l.initial(), r.initial()), expand, target,
                                   limits.state_budget);
    if (!path)
        return {false, std::nullopt};
    return {true, detail::spell(*path, pair.sigma)};
}

/// Mutual inclusion; on failure reports the first failing direction's
/// witness, left-to-right checked first.
inline EquivalenceVerdict equivalent(const Expr& left, const Expr& right,
                                     const Limits& limits = {}) {
    auto forward = includes(left, right, limits);
    if (!forward.holds)
        return {false, std::move(forward.witness), Side::Left};
    auto backward = includes(right, left, limits);
    if (!backward.holds)
        return {false, std::move(backward.witness), Side::Right};
    return {};
}

} // namespace crekit
