#pragma once

// Exact semantics: counter expansion, position (Glushkov) automata,
// membership, bounded enumeration and length sets.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "crekit/error.hpp"
#include "crekit/syntax.hpp"

namespace crekit {

/// A word is a sequence of symbol identifiers.
using Word = std::vector<std::string>;

/// Symbols separated by single spaces; the empty word is "%".
inline std::string format_word(const Word& w) {
    if (w.empty())
        return "%";
    std::string out;
    for (const auto& s : w) {
        if (!out.empty())
            out += ' ';
        out += s;
    }
    return out;
}

/// Inverse of format_word; tolerant of extra whitespace.
inline Word parse_word(std::string_view text) {
    Word w;
    std::istringstream in{std::string(text)};
    std::string tok;
    std::size_t count = 0;
    bool saw_epsilon = false;
    while (in >> tok) {
        ++count;
        if (tok == "%") {
            saw_epsilon = true;
            continue;
        }
        if (!is_symbol_lexeme(tok))
            throw SyntaxError(text.find(tok), "invalid symbol '" + tok + "' in word");
        w.push_back(tok);
    }
    if (saw_epsilon && count != 1)
        throw SyntaxError(0, "'%' must stand alone as the empty word");
    return w;
}

// ---------------------------------------------------------------------------
// Counter expansion

namespace detail {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

inline std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    return a > kSaturated - b ? kSaturated : a + b;
}

inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0)
        return 0;
    return a > kSaturated / b ? kSaturated : a * b;
}

// Size of an expanded subtree after flattening: node count, root kind and
// the number of children the root contributes when merged into a parent of
// the same kind.
struct Shape {
    std::uint64_t nodes;
    Expr::Kind root;
    std::uint64_t top;
};

struct ShapePart {
    Shape shape;
    std::uint64_t copies;
};

inline Shape list_shape(std::initializer_list<ShapePart> parts, Expr::Kind kind) {
    std::uint64_t count = 0;
    const Shape* single = nullptr;
    for (const auto& p : parts) {
        count = sat_add(count, p.copies);
        if (p.copies > 0)
            single = &p.shape;
    }
    if (count == 1)
        return *single;
    std::uint64_t nodes = 1;
    std::uint64_t top = 0;
    for (const auto& p : parts) {
        bool merges = p.shape.root == kind;
        nodes = sat_add(nodes, sat_mul(p.copies, merges ? p.shape.nodes - 1 : p.shape.nodes));
        top = sat_add(top, sat_mul(p.copies, merges ? p.shape.top : 1));
    }
    return {nodes, kind, top};
}

inline Shape expanded_shape(const Expr& e) {
    using K = Expr::Kind;
    switch (e.kind()) {
    case K::Symbol:
    case K::Epsilon: return {1, e.kind(), 0};
    case K::Concat:
    case K::Alt: {
        std::uint64_t nodes = 1, top = 0;
        for (const auto& c : e.children()) {
            Shape s = expanded_shape(c);
            bool merges = s.root == e.kind();
            nodes = sat_add(nodes, merges ? s.nodes - 1 : s.nodes);
            top = sat_add(top, merges ? s.top : 1);
        }
        return {nodes, e.kind(), top};
    }
    case K::Rep: {
        const CountRange& r = e.range();
        Shape body = expanded_shape(e.inner());
        Shape optional = list_shape({{body, 1}, {{1, K::Epsilon, 0}, 1}}, K::Alt);
        if (r.unbounded()) {
            Shape star{sat_add(body.nodes, 1), K::Rep, 0};
            return list_shape({{body, r.low()}, {star, 1}}, K::Concat);
        }
        return list_shape({{body, r.low()}, {optional, *r.high() - r.low()}}, K::Concat);
    }
    }
    return {0, K::Epsilon, 0};
}

inline Expr expand_unchecked(const Expr& e) {
    using K = Expr::Kind;
    switch (e.kind()) {
    case K::Symbol:
    case K::Epsilon: return e;
    case K::Concat:
    case K::Alt: {
        std::vector<Expr> kids;
        kids.reserve(e.children().size());
        for (const auto& c : e.children())
            kids.push_back(expand_unchecked(c));
        return e.is(K::Concat) ? Expr::concat(std::move(kids)) : Expr::alt(std::move(kids));
    }
    case K::Rep: {
        const CountRange& r = e.range();
        Expr body = expand_unchecked(e.inner());
        std::vector<Expr> parts(r.low(), body);
        if (r.unbounded()) {
            parts.push_back(Expr::rep(body, CountRange::at_least(0)));
        } else {
            Expr optional = Expr::alt({body, Expr::epsilon()});
            parts.insert(parts.end(), *r.high() - r.low(), optional);
        }
        return Expr::concat(std::move(parts));
    }
    }
    return e;
}

} // namespace detail

/// Node count of expand(e), computed without building it. Saturates at 2^64-1.
inline std::uint64_t expanded_node_count(const Expr& e) {
    return detail::expanded_shape(e).nodes;
}

/// Rewrites every counted repetition into concatenations of copies and
/// optional copies; the only repetition left is E{0,}. Throws
/// ExpansionCapExceeded before allocating anything if the result would have
/// more than `cap` nodes.
inline Expr expand(const Expr& e, std::uint64_t cap = Limits{}.expansion_cap) {
    std::uint64_t required = expanded_node_count(e);
    if (required > cap)
        throw ExpansionCapExceeded(required, cap);
    return detail::expand_unchecked(e);
}

// ---------------------------------------------------------------------------
// Position automata

using StateId = std::uint32_t;
using SymbolId = std::uint32_t;

struct Transition {
    StateId from;
    SymbolId symbol;
    StateId to;
    friend auto operator<=>(const Transition&, const Transition&) = default;
};

/// Epsilon-free automaton in position form: state 0 is initial, state p >= 1
/// is the p-th symbol occurrence of the source expression (document order)
/// and every transition into p reads label(p).
class Nfa {
public:
    Nfa(Alphabet alphabet, std::vector<SymbolId> labels,
        std::vector<std::vector<StateId>> successors, std::vector<bool> accepting)
        : alphabet_(std::move(alphabet)), labels_(std::move(labels)),
          successors_(std::move(successors)), accepting_(std::move(accepting)) {
        if (labels_.empty() || successors_.size() != labels_.size() ||
            accepting_.size() != labels_.size())
            throw std::invalid_argument("inconsistent automaton tables");
        for (const auto& succ : successors_)
            for (StateId q : succ)
                if (q == 0 || q >= labels_.size())
                    throw std::invalid_argument("transition to invalid state");
    }

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::size_t state_count() const noexcept { return labels_.size(); }
    StateId initial() const noexcept { return 0; }
    bool accepting(StateId q) const { return accepting_[q]; }

    std::vector<StateId> accepting_states() const {
        std::vector<StateId> out;
        for (StateId q = 0; q < state_count(); ++q)
            if (accepting_[q])
                out.push_back(q);
        return out;
    }

    /// Symbol read when entering q; meaningless for the initial state.
    SymbolId label(StateId q) const { return labels_[q]; }

    /// Sorted targets of every transition leaving p.
    std::span<const StateId> successors(StateId p) const { return successors_[p]; }

    std::size_t transition_count() const {
        std::size_t n = 0;
        for (const auto& s : successors_)
            n += s.size();
        return n;
    }

    std::vector<Transition> transitions() const {
        std::vector<Transition> out;
        for (StateId p = 0; p < state_count(); ++p)
            for (StateId q : successors_[p])
                out.push_back({p, labels_[q], q});
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Same automaton with symbol ids renumbered into `superset`, which must
    /// contain every symbol of this automaton's alphabet.
    Nfa relabeled(const Alphabet& superset) const {
        std::vector<SymbolId> map(alphabet_.size());
        for (std::size_t i = 0; i < alphabet_.size(); ++i) {
            auto idx = superset.index_of(alphabet_[i]);
            if (!idx)
                throw std::invalid_argument("relabel target misses '" + alphabet_[i] + "'");
            map[i] = static_cast<SymbolId>(*idx);
        }
        std::vector<SymbolId> labels = labels_;
        for (std::size_t q = 1; q < labels.size(); ++q)
            labels[q] = map[labels[q]];
        return Nfa(superset, std::move(labels), successors_, accepting_);
    }

private:
    Alphabet alphabet_;
    std::vector<SymbolId> labels_;
    std::vector<std::vector<StateId>> successors_;
    std::vector<bool> accepting_;
};

namespace detail {

struct PositionInfo {
    bool nullable = false;
    std::vector<StateId> first;
    std::vector<StateId> last;
};

class GlushkovBuilder {
public:
    explicit GlushkovBuilder(Alphabet alphabet) : alphabet_(std::move(alphabet)) {
        labels_.push_back(0);
        follow_.emplace_back();
    }

    PositionInfo visit(const Expr& e) {
        using K = Expr::Kind;
        switch (e.kind()) {
        case K::Symbol: {
            auto id = static_cast<StateId>(labels_.size());
            labels_.push_back(static_cast<SymbolId>(*alphabet_.index_of(e.name())));
            follow_.emplace_back();
            return {false, {id}, {id}};
        }
        case K::Epsilon: return {true, {}, {}};
        case K::Concat: {
            auto kids = e.children();
            PositionInfo acc = visit(kids.front());
            for (std::size_t i = 1; i < kids.size(); ++i) {
                PositionInfo next = visit(kids[i]);
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
            PositionInfo acc;
            for (const auto& c : e.children()) {
                PositionInfo next = visit(c);
                acc.nullable = acc.nullable || next.nullable;
                acc.first.insert(acc.first.end(), next.first.begin(), next.first.end());
                acc.last.insert(acc.last.end(), next.last.begin(), next.last.end());
            }
            return acc;
        }
        case K::Rep: {
            const CountRange& r = e.range();
            if (r.low() > 1 || (r.high() && *r.high() > 1))
                throw std::invalid_argument(
                    "position automaton needs a counter-free expression; expand first");
            PositionInfo body = visit(e.inner());
            if (r.unbounded())
                link(body.last, body.first);
            body.nullable = body.nullable || r.low() == 0;
            return body;
        }
        }
        return {};
    }

    Nfa finish(const PositionInfo& root) {
        follow_[0] = root.first;
        for (auto& f : follow_) {
            std::sort(f.begin(), f.end());
            f.erase(std::unique(f.begin(), f.end()), f.end());
        }
        std::vector<bool> accepting(labels_.size(), false);
        for (StateId q : root.last)
            accepting[q] = true;
        accepting[0] = root.nullable;
        return Nfa(std::move(alphabet_), std::move(labels_), std::move(follow_),
                   std::move(accepting));
    }

private:
    void link(const std::vector<StateId>& from, const std::vector<StateId>& to) {
        if (to.empty())
            return;
        for (StateId p : from)
            follow_[p].insert(follow_[p].end(), to.begin(), to.end());
    }

    Alphabet alphabet_;
    std::vector<SymbolId> labels_;
    std::vector<std::vector<StateId>> follow_;
};

} // namespace detail

/// Position automaton of a counter-free expression. Repetitions must be
/// E{0,}, E{1,}, E{0,1} or E{1,1}; anything else throws
/// std::invalid_argument (run expand first).
inline Nfa glushkov(const Expr& e) {
    detail::GlushkovBuilder builder(alphabet_of(e));
    detail::PositionInfo root = builder.visit(e);
    return builder.finish(root);
}

/// Computes successor sets of state sets, grouped by symbol.
class SubsetStepper {
public:
    explicit SubsetStepper(const Nfa& nfa)
        : nfa_(nfa), marks_((nfa.state_count() + 63) / 64, 0) {}

    /// by_symbol[a] receives the sorted successors of `from` on symbol a.
    void step(std::span<const StateId> from, std::vector<std::vector<StateId>>& by_symbol) {
        by_symbol.assign(nfa_.alphabet().size(), {});
        std::fill(marks_.begin(), marks_.end(), 0);
        bool any = false;
        for (StateId p : from)
            for (StateId q : nfa_.successors(p)) {
                marks_[q >> 6] |= std::uint64_t{1} << (q & 63);
                any = true;
            }
        if (!any)
            return;
        for (std::size_t w = 0; w < marks_.size(); ++w) {
            std::uint64_t bits = marks_[w];
            while (bits) {
                auto q = static_cast<StateId>(w * 64 + std::countr_zero(bits));
                by_symbol[nfa_.label(q)].push_back(q);
                bits &= bits - 1;
            }
        }
    }

    /// Successors of `from` reading symbol a.
    std::vector<StateId> step(std::span<const StateId> from, SymbolId a) const {
        std::vector<StateId> out;
        for (StateId p : from)
            for (StateId q : nfa_.successors(p))
                if (nfa_.label(q) == a)
                    out.push_back(q);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    bool any_accepting(std::span<const StateId> set) const {
        return std::any_of(set.begin(), set.end(),
                           [&](StateId q) { return nfa_.accepting(q); });
    }

private:
    const Nfa& nfa_;
    std::vector<std::uint64_t> marks_;
};

/// Expression bundled with its expanded position automaton, for repeated
/// queries against the same language.
class CompiledExpr {
public:
    explicit CompiledExpr(Expr e, const Limits& limits = {})
        : expr_(std::move(e)), nfa_(glushkov(expand(expr_, limits.expansion_cap))) {}

    const Expr& expr() const noexcept { return expr_; }
    const Nfa& nfa() const noexcept { return nfa_; }

    bool member(const Word& w) const {
        SubsetStepper stepper(nfa_);
        std::vector<StateId> current{nfa_.initial()};
        for (const auto& s : w) {
            auto a = nfa_.alphabet().index_of(s);
            if (!a)
                return false;
            current = stepper.step(current, static_cast<SymbolId>(*a));
            if (current.empty())
                return false;
        }
        return stepper.any_accepting(current);
    }

private:
    Expr expr_;
    Nfa nfa_;
};

/// w in L(e), by subset simulation over the expanded position automaton.
inline bool member(const Expr& e, const Word& w, const Limits& limits = {}) {
    return CompiledExpr(e, limits).member(w);
}

// ---------------------------------------------------------------------------
// Enumeration

/// Shortest distance from each state to an accepting state; max() if none.
inline std::vector<std::size_t> distance_to_accept(const Nfa& nfa) {
    constexpr auto unreachable = std::numeric_limits<std::size_t>::max();
    std::vector<std::vector<StateId>> preds(nfa.state_count());
    for (StateId p = 0; p < nfa.state_count(); ++p)
        for (StateId q : nfa.successors(p))
            preds[q].push_back(p);
    std::vector<std::size_t> dist(nfa.state_count(), unreachable);
    std::queue<StateId> queue;
    for (StateId q : nfa.accepting_states()) {
        dist[q] = 0;
        queue.push(q);
    }
    while (!queue.empty()) {
        StateId q = queue.front();
        queue.pop();
        for (StateId p : preds[q])
            if (dist[p] == unreachable) {
                dist[p] = dist[q] + 1;
                queue.push(p);
            }
    }
    return dist;
}

/// Visits the words of L(nfa) of length <= max_len in length-then-
/// lexicographic order (symbol order = alphabet order). The visitor returns
/// false to stop early. Only prefixes that can still be completed within
/// max_len are kept, so each kept prefix accounts for at least one distinct
/// word; more than `word_limit` words or live prefixes throws ResultTooLarge.
inline void for_each_word(const Nfa& nfa, std::size_t max_len, std::uint64_t word_limit,
                          const std::function<bool(const std::vector<SymbolId>&)>& visit) {
    const auto dist = distance_to_accept(nfa);
    auto viable = [&](std::span<const StateId> set, std::size_t remaining) {
        return std::any_of(set.begin(), set.end(),
                           [&](StateId q) { return dist[q] <= remaining; });
    };

    struct Prefix {
        std::vector<SymbolId> word;
        std::vector<StateId> states;
    };
    std::vector<Prefix> frontier;
    if (dist[nfa.initial()] <= max_len)
        frontier.push_back({{}, {nfa.initial()}});

    SubsetStepper stepper(nfa);
    std::vector<std::vector<StateId>> by_symbol;
    std::uint64_t emitted = 0;
    for (std::size_t len = 0; len <= max_len && !frontier.empty(); ++len) {
        for (const auto& p : frontier) {
            if (!stepper.any_accepting(p.states))
                continue;
            if (++emitted > word_limit)
                throw ResultTooLarge(word_limit);
            if (!visit(p.word))
                return;
        }
        if (len == max_len)
            break;
        std::vector<Prefix> next;
        for (const auto& p : frontier) {
            stepper.step(p.states, by_symbol);
            for (SymbolId a = 0; a < by_symbol.size(); ++a) {
                if (by_symbol[a].empty() || !viable(by_symbol[a], max_len - len - 1))
                    continue;
                if (emitted + next.size() >= word_limit)
                    throw ResultTooLarge(word_limit);
                Prefix child{p.word, std::move(by_symbol[a])};
                child.word.push_back(a);
                next.push_back(std::move(child));
            }
        }
        frontier = std::move(next);
    }
}

/// Words of L(e) up to max_len, length-then-lexicographic by alphabet_of(e).
inline std::vector<Word> enumerate(const Expr& e, std::size_t max_len, const Limits& limits = {}) {
    CompiledExpr compiled(e, limits);
    const Alphabet& sigma = compiled.nfa().alphabet();
    std::vector<Word> out;
    for_each_word(compiled.nfa(), max_len, limits.word_limit,
                  [&](const std::vector<SymbolId>& w) {
                      Word word;
                      word.reserve(w.size());
                      for (SymbolId a : w)
                          word.push_back(sigma[a]);
                      out.push_back(std::move(word));
                      return true;
                  });
    return out;
}

// ---------------------------------------------------------------------------
// Length sets

/// Word lengths of a language, truncated at `cutoff`. `saturated` is set
/// exactly when the language also contains words longer than `cutoff`.
struct LengthSet {
    std::uint64_t cutoff = 0;
    std::vector<std::uint64_t> members;
    bool saturated = false;

    bool contains(std::uint64_t n) const {
        return std::binary_search(members.begin(), members.end(), n);
    }
    friend bool operator==(const LengthSet&, const LengthSet&) = default;
};

namespace detail {

// Fixed-width bitset over [0, cutoff].
class LengthBits {
public:
    explicit LengthBits(std::uint64_t cutoff)
        : cutoff_(cutoff), words_(cutoff / 64 + 1, 0) {}

    void set(std::uint64_t i) {
        if (i <= cutoff_)
            words_[i >> 6] |= std::uint64_t{1} << (i & 63);
    }
    bool test(std::uint64_t i) const {
        return i <= cutoff_ && (words_[i >> 6] >> (i & 63)) & 1;
    }
    bool empty() const {
        return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
    }
    std::optional<std::uint64_t> max() const {
        for (std::size_t w = words_.size(); w-- > 0;)
            if (words_[w])
                return w * 64 + 63 - std::countl_zero(words_[w]);
        return std::nullopt;
    }
    LengthBits& operator|=(const LengthBits& o) {
        for (std::size_t i = 0; i < words_.size(); ++i)
            words_[i] |= o.words_[i];
        return *this;
    }
    /// Bits shifted up by k, truncated at cutoff.
    LengthBits shifted(std::uint64_t k) const {
        LengthBits out(cutoff_);
        if (k > cutoff_)
            return out;
        std::size_t word_shift = k / 64;
        unsigned bit_shift = k % 64;
        for (std::size_t i = words_.size(); i-- > word_shift;) {
            std::uint64_t v = words_[i - word_shift] << bit_shift;
            if (bit_shift && i - word_shift > 0)
                v |= words_[i - word_shift - 1] >> (64 - bit_shift);
            out.words_[i] = v;
        }
        out.trim();
        return out;
    }
    template <class F> void for_each(F&& f) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits) {
                f(w * 64 + std::countr_zero(bits));
                bits &= bits - 1;
            }
        }
    }
    friend bool operator==(const LengthBits&, const LengthBits&) = default;

private:
    void trim() {
        unsigned used = cutoff_ % 64 + 1;
        if (used < 64)
            words_.back() &= (std::uint64_t{1} << used) - 1;
    }

    std::uint64_t cutoff_;
    std::vector<std::uint64_t> words_;
};

struct Lengths {
    LengthBits bits;
    bool over; // some word is longer than the cutoff
    friend bool operator==(const Lengths&, const Lengths&) = default;
};

inline Lengths sumset(const Lengths& a, const Lengths& b, std::uint64_t cutoff) {
    LengthBits out(cutoff);
    b.bits.for_each([&](std::uint64_t k) { out |= a.bits.shifted(k); });
    auto ma = a.bits.max(), mb = b.bits.max();
    bool over = a.over || b.over || (ma && mb && *ma + *mb > cutoff);
    return {std::move(out), over};
}

inline Lengths lengths_of(const Expr& e, std::uint64_t cutoff) {
    using K = Expr::Kind;
    switch (e.kind()) {
    case K::Symbol: {
        Lengths r{LengthBits(cutoff), cutoff < 1};
        r.bits.set(1);
        return r;
    }
    case K::Epsilon: {
        Lengths r{LengthBits(cutoff), false};
        r.bits.set(0);
        return r;
    }
    case K::Concat: {
        auto kids = e.children();
        Lengths acc = lengths_of(kids.front(), cutoff);
        for (std::size_t i = 1; i < kids.size(); ++i)
            acc = sumset(acc, lengths_of(kids[i], cutoff), cutoff);
        return acc;
    }
    case K::Alt: {
        Lengths acc{LengthBits(cutoff), false};
        for (const auto& c : e.children()) {
            Lengths l = lengths_of(c, cutoff);
            acc.bits |= l.bits;
            acc.over = acc.over || l.over;
        }
        return acc;
    }
    case K::Rep: {
        const CountRange& r = e.range();
        const Lengths body = lengths_of(e.inner(), cutoff);
        Lengths power{LengthBits(cutoff), false}; // L^0 = {0}
        power.bits.set(0);
        Lengths result{LengthBits(cutoff), false};
        if (r.low() == 0)
            result = power;
        // L^i for i = 1, 2, ...; the sequence either reaches a fixpoint or
        // runs past the cutoff within cutoff + 2 steps.
        for (std::uint64_t i = 1;; ++i) {
            Lengths next = sumset(power, body, cutoff);
            bool in_range = i >= r.low();
            if (in_range) {
                result.bits |= next.bits;
                result.over = result.over || next.over;
            }
            if (r.high() && i == *r.high())
                break;
            bool fixpoint = next == power;
            bool exhausted = next.bits.empty();
            if (fixpoint || exhausted) {
                // Every later power equals `next`, including L^low.
                if (!in_range) {
                    result.bits |= next.bits;
                    result.over = result.over || next.over;
                }
                break;
            }
            power = std::move(next);
        }
        return result;
    }
    }
    return {LengthBits(cutoff), false};
}

} // namespace detail

/// { |w| : w in L(e), |w| <= cutoff }, computed on the unexpanded tree.
inline LengthSet length_set(const Expr& e, std::uint64_t cutoff) {
    detail::Lengths l = detail::lengths_of(e, cutoff);
    LengthSet out;
    out.cutoff = cutoff;
    out.saturated = l.over;
    l.bits.for_each([&](std::uint64_t n) { out.members.push_back(n); });
    return out;
}

} // namespace crekit
