#include "doctest.h"

#include "support.hpp"

#include "tiepart/branchers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

using namespace tiepart;

namespace {

// Values a=1, b=2, c=3.
constexpr int a = 1, b = 2, c = 3;

std::vector<std::vector<int>> value_sets(const std::vector<TieGroup>& groups)
{
    std::vector<std::vector<int>> out;
    for (const auto& g : groups)
        out.push_back(g.values);
    return out;
}

} // namespace

TEST_CASE("group_ties examples")
{
    const std::vector<RankedValue> tie{{a, 0.495}, {b, 0.495}, {c, 0.01}};
    CHECK(value_sets(group_ties(tie)) == std::vector<std::vector<int>>{{a, b}, {c}});

    const std::vector<RankedValue> distinct{{a, 3}, {b, 2}, {c, 1}};
    CHECK(value_sets(group_ties(distinct)) == std::vector<std::vector<int>>{{a}, {b}, {c}});

    const std::vector<RankedValue> band{{a, 100}, {b, 99}, {c, 50}};
    CHECK(value_sets(group_ties(band, 0.05)) == std::vector<std::vector<int>>{{a, b}, {c}});
    CHECK(value_sets(group_ties(band, 0.0)) == std::vector<std::vector<int>>{{a}, {b}, {c}});
}

TEST_CASE("group_ties orders by rank then value")
{
    const std::vector<RankedValue> ranked{{9, 1.0}, {4, 5.0}, {2, 1.0}, {7, 5.0}};
    const auto groups = group_ties(ranked);
    REQUIRE(groups.size() == 2);
    CHECK(groups[0].values == std::vector<int>{4, 7});
    CHECK(groups[0].rank == 5.0);
    CHECK(groups[1].values == std::vector<int>{2, 9});
}

TEST_CASE("band reference is the group head")
{
    // 100 -> 96 joins (4 <= 5), 92 is 8 away from the head and starts a new group
    // even though it is within 5% of 96.
    const std::vector<RankedValue> ranked{{1, 100}, {2, 96}, {3, 92}};
    CHECK(value_sets(group_ties(ranked, 0.05)) == std::vector<std::vector<int>>{{1, 2}, {3}});
}

TEST_CASE("group_ties rejects bad input")
{
    CHECK_THROWS_AS(group_ties(std::vector<RankedValue>{}), std::invalid_argument);
    const std::vector<RankedValue> one{{1, 1.0}};
    CHECK_THROWS_AS(group_ties(one, -0.1), std::invalid_argument);
    const std::vector<RankedValue> nan{{1, std::numeric_limits<double>::quiet_NaN()}};
    CHECK_THROWS_AS(group_ties(nan), std::invalid_argument);
}

TEST_CASE("labelling and partitioning examples")
{
    const std::vector<TieGroup> tied{{{a, b}, 0.495}, {{c}, 0.01}};
    CHECK(labelling_branches(tied) == BranchList{{{a}, 0}, {{b}, 1}, {{c}, 2}});
    CHECK(partitioning_branches(tied) == BranchList{{{a, b}, 0}, {{c}, 2}});

    const std::vector<TieGroup> single{{{a}, 1.0}};
    CHECK(labelling_branches(single) == BranchList{{{a}, 0}});

    const std::vector<TieGroup> distinct{{{a}, 3}, {{b}, 2}, {{c}, 1}};
    const auto lab = labelling_branches(distinct);
    CHECK(lab == BranchList{{{a}, 0}, {{b}, 1}, {{c}, 2}});
    CHECK(partitioning_branches(distinct) == lab);

    const std::vector<TieGroup> all{{{a, b, c}, 0.0}};
    CHECK(partitioning_branches(all) == BranchList{{{a, b, c}, 0}});
}

TEST_CASE("brancher properties on random rankings")
{
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 2000; ++trial) {
        const int n = testing_support::uniform(rng, 1, 9);
        std::vector<RankedValue> ranked;
        std::set<int> domain;
        for (int i = 0; i < n; ++i) {
            int v;
            do
                v = testing_support::uniform(rng, -5, 20);
            while (domain.count(v));
            domain.insert(v);
            ranked.push_back({v, static_cast<double>(testing_support::uniform(rng, 0, 4))});
        }
        const double pct = testing_support::uniform(rng, 0, 1) ? 0.0 : 0.1 * testing_support::uniform(rng, 1, 5);
        const auto groups = group_ties(ranked, pct);

        // Groups: ranks non-increasing, members within the band of the head,
        // and maximal (the next group's head is outside the band).
        for (std::size_t g = 0; g < groups.size(); ++g) {
            CHECK(std::is_sorted(groups[g].values.begin(), groups[g].values.end()));
            if (g + 1 < groups.size()) {
                CHECK(groups[g].rank >= groups[g + 1].rank);
                const double gap = std::abs(groups[g + 1].rank - groups[g].rank);
                if (pct == 0.0)
                    CHECK(gap > 0.0);
                else
                    CHECK(gap > pct * std::abs(groups[g].rank));
            }
        }

        for (auto mode : {BranchMode::labelling, BranchMode::partitioning}) {
            const auto branches = make_branches(mode, groups);
            std::multiset<int> covered;
            int expected_weight = 0;
            for (const auto& br : branches) {
                CHECK(br.discrepancy == expected_weight);
                expected_weight += static_cast<int>(br.allowed.size());
                covered.insert(br.allowed.begin(), br.allowed.end());
            }
            CHECK(std::set<int>(covered.begin(), covered.end()) == domain);
            CHECK(covered.size() == domain.size());
        }

        const bool singletons = std::all_of(groups.begin(), groups.end(), [](const TieGroup& g) { return g.values.size() == 1; });
        if (singletons)
            CHECK(labelling_branches(groups) == partitioning_branches(groups));
    }
}
