#include <catch_amalgamated.hpp>

#include "crekit/partition.hpp"
#include "support.hpp"

using namespace crekit;

namespace {

PartitionInstance inst(std::vector<std::uint64_t> w) { return PartitionInstance(std::move(w)); }

// Smallest bitmask (item i as bit i-1) whose subset weighs half the total.
std::optional<std::vector<std::size_t>> first_mask_split(const std::vector<std::uint64_t>& w) {
    std::uint64_t total = 0;
    for (auto x : w)
        total += x;
    if (total % 2)
        return std::nullopt;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << w.size()); ++mask) {
        std::uint64_t s = 0;
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < w.size(); ++i)
            if (mask >> i & 1) {
                s += w[i];
                idx.push_back(i + 1);
            }
        if (s == total / 2)
            return idx;
    }
    return std::nullopt;
}

} // namespace

TEST_CASE("PartitionInstance validation") {
    CHECK_THROWS_AS(inst({}), InvalidInstance);
    CHECK_THROWS_AS(inst({1, 0, 2}), InvalidInstance);
    auto p = inst({1, 2, 3});
    CHECK(p.k() == 3);
    CHECK(p.total() == 6);
    CHECK(p.half() == 3u);
    CHECK_FALSE(inst({1, 2}).half());
}

TEST_CASE("parse_weights") {
    CHECK(parse_weights("1 3").weights() == std::vector<std::uint64_t>{1, 3});
    CHECK(parse_weights("  4\n5\t6\n").weights() == std::vector<std::uint64_t>{4, 5, 6});
    CHECK_THROWS_AS(parse_weights("1 x"), SyntaxError);
    CHECK_THROWS_AS(parse_weights("1 -2"), SyntaxError);
    CHECK_THROWS_AS(parse_weights(""), InvalidInstance);
    CHECK_THROWS_AS(parse_weights("0 2"), InvalidInstance);
}

TEST_CASE("build_expressions") {
    auto [e1, e2] = build_expressions(inst({1, 1}));
    CHECK(render_expr(e1) == "a0{2,2}(a1{1,1}|%)(a2{1,1}|%)");
    CHECK(render_expr(e2) == "((a0|a1|a2){2,2}){1,2}");
    CHECK(alphabet_of(e2).symbols() == std::vector<std::string>{"a0", "a1", "a2"});

    auto [f1, f2] = build_expressions(inst({2, 2, 2}));
    CHECK(render_expr(f1) == "a0{4,4}(a1{2,2}|%)(a2{2,2}|%)(a3{2,2}|%)");
    CHECK(render_expr(f2) == "((a0|a1|a2|a3){4,6}){1,2}");

    try {
        build_expressions(inst({1, 2}));
        FAIL("expected OddTotal");
    } catch (const OddTotal& e) {
        CHECK(e.total() == 3);
        CHECK(e.code() == ErrorCode::OddTotal);
    }
}

TEST_CASE("construction size grows with digits, not values") {
    // Scaling every weight by 10^6 adds at most six digits per count.
    for (auto base : {std::vector<std::uint64_t>{1, 1}, {3, 5, 2}, {1, 2, 3, 4}}) {
        auto scaled = base;
        for (auto& w : scaled)
            w *= 1'000'000;
        auto small = build_expressions(inst(base));
        auto big = build_expressions(inst(scaled));
        auto grow1 = render_expr(big.e1).size() - render_expr(small.e1).size();
        auto grow2 = render_expr(big.e2).size() - render_expr(small.e2).size();
        CHECK(grow1 <= 6 * 2 * (base.size() + 1));
        CHECK(grow2 <= 6 * 2);
    }
    // Linear in the number of items.
    auto ones = [](std::size_t k) {
        auto p = build_expressions(PartitionInstance(std::vector<std::uint64_t>(k, 2)));
        return render_expr(p.e1).size() + render_expr(p.e2).size();
    };
    CHECK(ones(40) <= 2 * ones(20) + 40);
    CHECK(ones(80) <= 2 * ones(40) + 80);
}

TEST_CASE("brute_force_partition") {
    auto a = brute_force_partition(inst({1, 1}));
    CHECK(a.exists);
    CHECK(a.subset == std::vector<std::size_t>{1});

    REQUIRE(testing::subset_sums_by_mask({1, 3}) == std::set<std::uint64_t>{0, 1, 3, 4});
    CHECK_FALSE(brute_force_partition(inst({1, 3})).exists);

    auto c = brute_force_partition(inst({1, 2, 3}));
    CHECK(c.exists);
    CHECK(c.subset == std::vector<std::size_t>{1, 2});

    CHECK_FALSE(brute_force_partition(inst({1, 2})).exists);

    SECTION("agrees with mask enumeration, witness included") {
        for (std::size_t k = 1; k <= 5; ++k)
            for (const auto& w : testing::even_weight_lists(k, 4)) {
                auto r = brute_force_partition(inst(w));
                auto expected = first_mask_split(w);
                REQUIRE(r.exists == expected.has_value());
                REQUIRE(r.subset == expected);
                if (r.subset) {
                    std::uint64_t s = 0;
                    for (auto i : *r.subset)
                        s += w[i - 1];
                    REQUIRE(s == *inst(w).half());
                }
            }
    }
}

TEST_CASE("decide_partition_via_inclusion") {
    CHECK(decide_partition_via_inclusion(inst({1, 1})));
    CHECK_FALSE(decide_partition_via_inclusion(inst({1, 3})));

    int calls = 0;
    auto counting = [&](const Expr& a, const Expr& b) {
        ++calls;
        return includes(a, b);
    };
    CHECK_FALSE(decide_partition_via_inclusion(inst({1, 2}), counting));
    CHECK(calls == 0);
    CHECK(decide_partition_via_inclusion(inst({1, 2, 3}), counting));
    CHECK(calls == 1);

    // Any oracle works, including the enumeration-based one.
    auto reference = [](const Expr& a, const Expr& b) {
        return includes_reference(a, b, complete_length_bound(a, b));
    };
    CHECK(decide_partition_via_inclusion(inst({2, 1, 1}), reference));
    CHECK_FALSE(decide_partition_via_inclusion(inst({2, 2, 2}), reference));

    Limits tiny;
    tiny.expansion_cap = 10;
    CHECK_THROWS_AS(decide_partition_via_inclusion(inst({1, 1}), tiny), ExpansionCapExceeded);
}

TEST_CASE("verify_theorem_instance") {
    auto a = verify_theorem_instance(inst({1, 1}));
    CHECK(a.partition.exists);
    CHECK_FALSE(a.inclusion.holds);
    CHECK(a.inclusion.witness->size() == 3);
    CHECK(a.all_ok());

    auto b = verify_theorem_instance(inst({1, 3}));
    CHECK_FALSE(b.partition.exists);
    CHECK(b.inclusion.holds);
    CHECK_FALSE(b.inclusion.witness);
    CHECK(b.all_ok());

    REQUIRE(testing::subset_sums_by_mask({2, 2, 2}) == std::set<std::uint64_t>{0, 2, 4, 6});
    auto c = verify_theorem_instance(inst({2, 2, 2}));
    CHECK_FALSE(c.partition.exists);
    CHECK(c.inclusion.holds);
    CHECK(c.all_ok());

    CHECK_THROWS_AS(verify_theorem_instance(inst({1, 2})), OddTotal);
}

TEST_CASE("expected length sets match brute force") {
    for (std::size_t k = 1; k <= 3; ++k)
        for (const auto& w : testing::even_weight_lists(k, 3)) {
            auto p = inst(w);
            std::uint64_t n = *p.half();
            std::vector<std::uint64_t> expected;
            for (auto s : testing::subset_sums_by_mask(w))
                expected.push_back(n + 1 + s);
            REQUIRE(expected_e1_lengths(p) == expected);
            auto [e1, e2] = build_expressions(p);
            // Direct check of the lengths of E2 via enumeration at small n.
            if (n <= 2) {
                std::set<std::uint64_t> seen;
                for (const auto& word : enumerate(e2, 4 * n + 1, Limits{100000, 1000000, 10000000}))
                    seen.insert(word.size());
                REQUIRE(std::vector<std::uint64_t>(seen.begin(), seen.end()) ==
                        expected_e2_lengths(n));
            }
        }
}
