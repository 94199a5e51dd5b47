#pragma once

// PARTITION through #RE inclusion.
//
// For weights w1..wk with total 2n the construction builds, over the
// alphabet a0, a1, ..., ak,
//
//   E1 = a0{n+1,n+1} (a1{w1,w1}|%) ... (ak{wk,wk}|%)
//   E2 = ((a0|a1|...|ak){n+1,2n}){1,2}
//
// Word lengths in L(E1) are n+1 plus a subset sum, so they lie in
// [n+1, 3n+1]; L(E2) holds every word with length in [n+1, 4n] except 2n+1.
// Hence L(E1) ⊆ L(E2) exactly when no subset weighs n. Both expressions use
// each symbol once and are therefore unambiguous.

#include <algorithm>
#include <cctype>
#include <concepts>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crekit/decision.hpp"
#include "crekit/engine.hpp"
#include "crekit/error.hpp"
#include "crekit/syntax.hpp"
#include "crekit/unambiguity.hpp"

namespace crekit {

class PartitionInstance {
public:
    /// Throws InvalidInstance on an empty list or a zero weight.
    explicit PartitionInstance(std::vector<std::uint64_t> weights) : weights_(std::move(weights)) {
        if (weights_.empty())
            throw InvalidInstance("a partition instance needs at least one weight");
        for (std::size_t i = 0; i < weights_.size(); ++i) {
            if (weights_[i] == 0)
                throw InvalidInstance("weight " + std::to_string(i + 1) + " is zero");
            if (total_ > UINT64_MAX - weights_[i])
                throw InvalidInstance("total weight overflows 64 bits");
            total_ += weights_[i];
        }
    }

    const std::vector<std::uint64_t>& weights() const noexcept { return weights_; }
    std::size_t k() const noexcept { return weights_.size(); }
    std::uint64_t total() const noexcept { return total_; }

    /// Half the total; empty when the total is odd.
    std::optional<std::uint64_t> half() const {
        if (total_ % 2 != 0)
            return std::nullopt;
        return total_ / 2;
    }

private:
    std::vector<std::uint64_t> weights_;
    std::uint64_t total_ = 0;
};

/// Parses whitespace-separated positive decimal integers.
inline PartitionInstance parse_weights(std::string_view text) {
    std::vector<std::uint64_t> weights;
    std::size_t i = 0;
    while (i < text.size()) {
        if (std::isspace(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        std::uint64_t value = 0;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) {
            char c = text[i];
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw SyntaxError(i, std::string("weights must be decimal integers, found '") +
                                         c + "'");
            auto digit = static_cast<std::uint64_t>(c - '0');
            if (value > (UINT64_MAX - digit) / 10)
                throw SyntaxError(start, "weight does not fit in 64 bits");
            value = value * 10 + digit;
            ++i;
        }
        weights.push_back(value);
    }
    return PartitionInstance(std::move(weights));
}

struct ReductionPair {
    Expr e1;
    Expr e2;
};

inline std::string item_symbol(std::size_t i) { return "a" + std::to_string(i); }

/// Builds E1 and E2; throws OddTotal when the total weight is odd.
inline ReductionPair build_expressions(const PartitionInstance& inst) {
    auto n = inst.half();
    if (!n)
        throw OddTotal(inst.total());

    std::vector<Expr> parts;
    parts.push_back(Expr::rep(Expr::symbol(item_symbol(0)), CountRange::exactly(*n + 1)));
    for (std::size_t i = 1; i <= inst.k(); ++i) {
        auto w = inst.weights()[i - 1];
        parts.push_back(Expr::alt(
            {Expr::rep(Expr::symbol(item_symbol(i)), CountRange::exactly(w)), Expr::epsilon()}));
    }
    Expr e1 = Expr::concat(std::move(parts));

    std::vector<Expr> letters;
    for (std::size_t i = 0; i <= inst.k(); ++i)
        letters.push_back(Expr::symbol(item_symbol(i)));
    Expr e2 = Expr::rep(Expr::rep(Expr::alt(std::move(letters)), CountRange(*n + 1, 2 * *n)),
                        CountRange(1, 2));
    return {std::move(e1), std::move(e2)};
}

struct PartitionResult {
    bool exists = false;
    /// 1-based indices of a subset weighing exactly half the total.
    std::optional<std::vector<std::size_t>> subset;
};

/// All subset sums of the weights, ascending, as a membership table over
/// [0, total]. Memory is linear in the total weight.
inline std::vector<bool> subset_sums(const std::vector<std::uint64_t>& weights) {
    std::uint64_t total = 0;
    for (auto w : weights)
        total += w;
    std::vector<bool> reach(total + 1, false);
    reach[0] = true;
    for (auto w : weights)
        for (std::uint64_t s = total + 1; s-- > w;)
            if (reach[s - w])
                reach[s] = true;
    return reach;
}

/// Subset-sum dynamic program with witness reconstruction. The witness is
/// the subset with the smallest bitmask value (item i as bit i-1), found by
/// dropping items from the highest index down whenever the rest still
/// reaches the target.
inline PartitionResult brute_force_partition(const PartitionInstance& inst) {
    auto half = inst.half();
    if (!half)
        return {};
    const auto target = *half;
    const auto& w = inst.weights();
    const std::size_t k = w.size();

    // reach[i][s]: some subset of the first i items weighs s.
    std::vector<std::vector<bool>> reach(k + 1, std::vector<bool>(target + 1, false));
    reach[0][0] = true;
    for (std::size_t i = 1; i <= k; ++i)
        for (std::uint64_t s = 0; s <= target; ++s)
            reach[i][s] = reach[i - 1][s] || (s >= w[i - 1] && reach[i - 1][s - w[i - 1]]);
    if (!reach[k][target])
        return {};

    std::vector<std::size_t> subset;
    std::uint64_t s = target;
    for (std::size_t i = k; i >= 1; --i) {
        if (reach[i - 1][s])
            continue;
        subset.push_back(i);
        s -= w[i - 1];
    }
    std::reverse(subset.begin(), subset.end());
    return {true, std::move(subset)};
}

/// Anything callable as oracle(left, right) returning an InclusionVerdict.
template <class F>
concept InclusionOracle = requires(F f, const Expr& a, const Expr& b) {
    { f(a, b) } -> std::convertible_to<InclusionVerdict>;
};

/// Answers PARTITION with one inclusion query: a split exists iff
/// L(E1) ⊄ L(E2). Odd totals answer false without consulting the oracle.
template <InclusionOracle Oracle>
bool decide_partition_via_inclusion(const PartitionInstance& inst, Oracle&& oracle) {
    if (!inst.half())
        return false;
    auto [e1, e2] = build_expressions(inst);
    InclusionVerdict v = oracle(e1, e2);
    return !v.holds;
}

inline bool decide_partition_via_inclusion(const PartitionInstance& inst,
                                           const Limits& limits = {}) {
    return decide_partition_via_inclusion(
        inst, [&](const Expr& a, const Expr& b) { return includes(a, b, limits); });
}

struct TheoremReport {
    PartitionInstance instance;
    std::uint64_t n = 0;
    Expr e1;
    Expr e2;
    PartitionResult partition;
    InclusionVerdict inclusion;
    bool e1_unambiguous = false;
    bool e2_unambiguous = false;
    bool e1_lengths_ok = false;
    bool e2_lengths_ok = false;
    /// Counterexample has length 2n+1, starts with a0^{n+1}, and is in
    /// L(E1) \ L(E2). Vacuously true when inclusion holds.
    bool witness_ok = false;

    bool iff_ok() const { return partition.exists == !inclusion.holds; }
    bool length_laws_ok() const { return e1_lengths_ok && e2_lengths_ok; }
    bool all_ok() const {
        return iff_ok() && length_laws_ok() && e1_unambiguous && e2_unambiguous && witness_ok;
    }
};

/// Expected lengths of L(E1): n+1 plus every subset sum.
inline std::vector<std::uint64_t> expected_e1_lengths(const PartitionInstance& inst) {
    std::uint64_t n = inst.total() / 2;
    auto sums = subset_sums(inst.weights());
    std::vector<std::uint64_t> out;
    for (std::uint64_t s = 0; s < sums.size(); ++s)
        if (sums[s])
            out.push_back(n + 1 + s);
    return out;
}

/// Expected lengths of L(E2): [n+1, 4n] without 2n+1.
inline std::vector<std::uint64_t> expected_e2_lengths(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t len = n + 1; len <= 4 * n; ++len)
        if (len != 2 * n + 1)
            out.push_back(len);
    return out;
}

/// Runs the reduction on one instance and checks every claim about it
/// against independent computations. Throws OddTotal on odd totals.
inline TheoremReport verify_theorem_instance(const PartitionInstance& inst,
                                             const Limits& limits = {}) {
    auto [e1, e2] = build_expressions(inst);
    const std::uint64_t n = *inst.half();
    TheoremReport r{inst, n, e1, e2, {}, {}, false, false, false, false, false};

    r.partition = brute_force_partition(inst);
    r.inclusion = includes(e1, e2, limits);
    r.e1_unambiguous = is_single_occurrence(e1) && check_unambiguous(e1).unambiguous;
    r.e2_unambiguous = is_single_occurrence(e2) && check_unambiguous(e2).unambiguous;

    const std::uint64_t cutoff = 4 * n + 1;
    LengthSet l1 = length_set(e1, cutoff);
    LengthSet l2 = length_set(e2, cutoff);
    r.e1_lengths_ok = !l1.saturated && l1.members == expected_e1_lengths(inst);
    r.e2_lengths_ok = !l2.saturated && l2.members == expected_e2_lengths(n);

    if (r.inclusion.holds) {
        r.witness_ok = true;
    } else {
        const Word& w = *r.inclusion.witness;
        bool prefix = w.size() >= n + 1;
        for (std::uint64_t i = 0; prefix && i <= n; ++i)
            prefix = w[i] == item_symbol(0);
        r.witness_ok = w.size() == 2 * n + 1 && prefix && member(e1, w, limits) &&
                       !member(e2, w, limits);
    }
    return r;
}

} // namespace crekit
