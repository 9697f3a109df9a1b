#include "doctest.h"

#include "oracles.hpp"

#include "tiepart/probsim.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <sstream>

using namespace tiepart;
using namespace tiepart::probsim;

namespace {

ProbTreeSpec example_spec()
{
    ProbTreeSpec s;
    s.depth = 2;
    s.width = 3;
    s.probs = {{0.495, 0.495, 0.01}, {0.95, 0.04, 0.01}};
    s.tie_groups = {{0, 0, 1}, {0, 1, 2}};
    s.validate();
    return s;
}

ProbTreeSpec untied_copy(const ProbTreeSpec& spec)
{
    auto s = spec;
    for (int i = 0; i < s.depth; ++i)
        for (int j = 0; j < s.width; ++j)
            s.tie_groups[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = j;
    // Break ties in the probabilities as well so the spec stays valid.
    for (auto& row : s.probs) {
        double total = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) {
            row[j] *= std::pow(0.9, static_cast<double>(j));
            total += row[j];
        }
        for (auto& p : row)
            p /= total;
    }
    s.validate();
    return s;
}

constexpr Strategy strategies[] = {Strategy::dfs, Strategy::lds, Strategy::dds};

} // namespace

TEST_CASE("leaf_probability examples")
{
    const auto s = example_spec();
    const std::vector<int> p00{0, 0}, p11{1, 1};
    CHECK(leaf_probability(s, p00) == doctest::Approx(0.47025).epsilon(1e-15));
    CHECK(leaf_probability(s, p11) == doctest::Approx(0.0198).epsilon(1e-15));

    ProbTreeSpec one{3, 1, {{1.0}, {1.0}, {1.0}}, {{0}, {0}, {0}}};
    const std::vector<int> zeros{0, 0, 0};
    CHECK(leaf_probability(one, zeros) == 1.0);

    const std::vector<int> bad{0, 3};
    CHECK_THROWS_AS(leaf_probability(s, bad), std::invalid_argument);
}

TEST_CASE("ordered_leaves examples")
{
    const auto s = example_spec();
    const auto lab = ordered_leaves(s, BranchMode::labelling, Strategy::lds, 3);
    REQUIRE(lab.size() == 3);
    CHECK(std::abs(lab[0] - 0.47025) < 1e-15);
    CHECK(std::abs(lab[1] - 0.0198) < 1e-15);
    CHECK(std::abs(lab[2] - 0.47025) < 1e-15);

    const auto prt = ordered_leaves(s, BranchMode::partitioning, Strategy::lds, 2);
    REQUIRE(prt.size() == 2);
    CHECK(std::abs(prt[0] - 0.47025) < 1e-15);
    CHECK(std::abs(prt[1] - 0.47025) < 1e-15);

    CHECK_THROWS_AS(ordered_leaves(s, BranchMode::labelling, Strategy::lds, 0), std::invalid_argument);

    const auto plain = untied_copy(s);
    for (auto st : strategies)
        CHECK(ordered_leaves(plain, BranchMode::labelling, st, 9) == ordered_leaves(plain, BranchMode::partitioning, st, 9));
}

TEST_CASE("visit order agrees with the sorted-key oracle")
{
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 400; ++trial) {
        const auto spec = random_spec(rng, 4, 3, trial % 2 == 1);
        for (auto mode : {BranchMode::labelling, BranchMode::partitioning})
            for (auto st : strategies) {
                const auto got = visit_order(spec, mode, st, 1000);
                const auto want = oracle::strategy_order(spec, mode, st);
                REQUIRE(got.size() == want.size());
                for (std::size_t i = 0; i < got.size(); ++i) {
                    CHECK(got[i].path == want[i].path);
                    CHECK(got[i].discrepancy == want[i].discrepancy);
                    CHECK(got[i].probability == doctest::Approx(want[i].probability).epsilon(1e-14));
                }
            }
    }
}

TEST_CASE("cumulative_curve examples")
{
    const std::vector<double> probs{0.5, 0.25};
    const auto c = cumulative_curve(probs);
    REQUIRE(c.points.size() == 2);
    CHECK(c.points[0].k == 1);
    CHECK(c.points[0].cumulative == 0.5);
    CHECK(c.points[1].k == 2);
    CHECK(c.points[1].cumulative == 0.75);
    CHECK(cumulative_curve(std::vector<double>{}).points.empty());
}

TEST_CASE("prefix sums on the two-level example")
{
    const auto s = example_spec();
    const auto lab = cumulative_curve(ordered_leaves(s, BranchMode::labelling, Strategy::lds, 9));
    const auto prt = cumulative_curve(ordered_leaves(s, BranchMode::partitioning, Strategy::lds, 9));
    CHECK(std::abs(prt.points[1].cumulative - 0.9405) < 1e-12);
    CHECK(std::abs(lab.points[1].cumulative - 0.49005) < 1e-12);

    // Hand enumeration. Labelling takes (2,0) at weight 2 while partitioning
    // reaches (1,2) at weight 2 through the tie and (2,0) only at k = 7, so
    // the LDS curves cross at k = 6.
    CHECK(std::abs(lab.points[5].cumulative - 0.99455) < 1e-12);
    CHECK(std::abs(prt.points[5].cumulative - 0.99) < 1e-12);

    const auto v = verify_dominance(s, Strategy::lds);
    CHECK_FALSE(v.pass);
    REQUIRE(v.first_strict_k);
    CHECK(*v.first_strict_k == 2);
    REQUIRE(v.failing_k);
    CHECK(*v.failing_k == 6);
    CHECK(std::abs(v.partitioning_sum - 0.99) < 1e-12);
    CHECK(std::abs(v.labelling_sum - 0.99455) < 1e-12);

    const auto d = verify_dominance(s, Strategy::dfs);
    CHECK(d.pass);
    CHECK(*d.first_strict_k == 2);
}

TEST_CASE("no ties gives equality everywhere")
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const auto spec = random_spec(rng, 4, 3, false);
        if (spec.has_tie())
            continue;
        for (auto st : strategies) {
            const auto v = verify_dominance(spec, st);
            CHECK(v.pass);
            CHECK_FALSE(v.first_strict_k);
        }
    }
}

TEST_CASE("dominance verdicts on 1000 random specs")
{
    // DFS never lets partitioning fall behind. For LDS and DDS the verdict
    // must agree with prefix sums over the oracle order, whichever way it goes.
    std::mt19937_64 rng(1);
    int tied = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto spec = random_spec(rng, 4, 3, trial % 2 == 0);
        tied += spec.has_tie();
        for (auto st : strategies) {
            const auto v = verify_dominance(spec, st);
            const auto lab = oracle::strategy_order(spec, BranchMode::labelling, st);
            const auto prt = oracle::strategy_order(spec, BranchMode::partitioning, st);
            std::optional<std::size_t> failing;
            double sl = 0.0, sp = 0.0;
            for (std::size_t k = 0; k < lab.size() && !failing; ++k) {
                sl += lab[k].probability;
                sp += prt[k].probability;
                if (sp < sl - dominance_tolerance)
                    failing = k + 1;
            }
            CHECK(v.pass == !failing.has_value());
            CHECK(v.failing_k == failing);
            if (st == Strategy::dfs)
                CHECK_MESSAGE(v.pass, "trial " << trial);
        }
    }
    CHECK(tied >= 500);
}

TEST_CASE("reversed partitioning order is caught")
{
    const auto v = verify_dominance(example_spec(), Strategy::lds, 1u << 20, true);
    CHECK_FALSE(v.pass);
    REQUIRE(v.failing_k);
    CHECK(*v.failing_k == 1);
    CHECK(v.partitioning_sum < v.labelling_sum);
}

TEST_CASE("size bound")
{
    const auto spec = tree_with_ties(30, 3, even_tie_levels(30, 0.1));
    CHECK_THROWS_AS(verify_dominance(spec, Strategy::dfs), std::length_error);
}

TEST_CASE("total mass is one")
{
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const auto spec = random_spec(rng, 4, 3, trial % 2 == 0);
        for (auto mode : {BranchMode::labelling, BranchMode::partitioning})
            for (auto st : strategies) {
                double sum = 0.0;
                for (double p : ordered_leaves(spec, mode, st, 100000))
                    sum += p;
                CHECK(std::abs(sum - 1.0) < 1e-9);
            }
    }
}

TEST_CASE("leaves of one sub-problem share their probability")
{
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const auto spec = random_spec(rng, 4, 3, true);
        std::map<std::vector<int>, std::vector<double>> by_groups;
        for (const auto& leaf : visit_order(spec, BranchMode::partitioning, Strategy::dfs, 100000)) {
            std::vector<int> key;
            for (std::size_t l = 0; l < leaf.path.size(); ++l)
                key.push_back(spec.tie_groups[l][static_cast<std::size_t>(leaf.path[l])]);
            by_groups[key].push_back(leaf.probability);
        }
        for (const auto& [key, probs] : by_groups)
            for (double p : probs)
                CHECK(p == probs.front());
    }
}

TEST_CASE("first divergence lies on a path through a tie")
{
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 300; ++trial) {
        const auto spec = random_spec(rng, 4, 3, true);
        for (auto st : strategies) {
            const auto lab = visit_order(spec, BranchMode::labelling, st, 100000);
            const auto prt = visit_order(spec, BranchMode::partitioning, st, 100000);
            double sl = 0.0, sp = 0.0;
            for (std::size_t k = 0; k < lab.size(); ++k) {
                sl += lab[k].probability;
                sp += prt[k].probability;
                if (std::abs(sl - sp) <= 1e-12)
                    continue;
                auto through_tie = [&](const std::vector<int>& path) {
                    for (std::size_t l = 0; l < path.size(); ++l) {
                        const auto& g = spec.tie_groups[l];
                        const int gid = g[static_cast<std::size_t>(path[l])];
                        if (std::count(g.begin(), g.end(), gid) > 1)
                            return true;
                    }
                    return false;
                };
                CHECK((through_tie(lab[k].path) || through_tie(prt[k].path)));
                break;
            }
        }
    }
}

TEST_CASE("tie placement and level shapes")
{
    CHECK(even_tie_levels(30, 0.10) == std::vector<int>{0, 10, 20});
    CHECK(even_tie_levels(30, 0.0).empty());
    CHECK(even_tie_levels(30, 0.33).size() == 10);
    CHECK(even_tie_levels(30, 0.50).size() == 15);
    CHECK_THROWS_AS(even_tie_levels(30, 1.5), std::invalid_argument);
    CHECK(untied_level(3) == std::vector<double>{0.95, 0.04, 0.01});
    CHECK(tied_level(3) == std::vector<double>{0.495, 0.495, 0.01});
    for (int w = 2; w <= 6; ++w) {
        double a = 0, b = 0;
        for (double p : untied_level(w))
            a += p;
        for (double p : tied_level(w))
            b += p;
        CHECK(std::abs(a - 1.0) < 1e-12);
        CHECK(std::abs(b - 1.0) < 1e-12);
    }
}

TEST_CASE("depth-30 curves")
{
    SUBCASE("no ties gives identical curves")
    {
        const auto c = depth30_experiment(0.0, Strategy::lds, 2000);
        REQUIRE(c.labelling.points.size() == 2000);
        for (std::size_t i = 0; i < 2000; ++i)
            CHECK(c.labelling.points[i].cumulative == c.partitioning.points[i].cumulative);
    }
    SUBCASE("first labelling DFS point with 10% ties")
    {
        const auto c = depth30_experiment(0.10, Strategy::dfs, 10);
        const double expected = std::pow(0.95, 27) * std::pow(0.495, 3);
        CHECK(std::abs(c.labelling.points[0].cumulative - expected) < 1e-15);
    }
    SUBCASE("partitioning stays ahead under LDS with half the levels tied")
    {
        const auto c = depth30_experiment(0.50, Strategy::lds, 5000);
        bool strict = false;
        for (std::size_t i = 0; i < c.labelling.points.size(); ++i) {
            CHECK(c.partitioning.points[i].cumulative >= c.labelling.points[i].cumulative - 1e-12);
            strict = strict || c.partitioning.points[i].cumulative > c.labelling.points[i].cumulative + 1e-12;
        }
        CHECK(strict);
    }
}

TEST_CASE("curve CSV layout")
{
    const auto c = compare_curves(example_spec(), Strategy::lds, 9);
    std::ostringstream out;
    write_curves_csv(out, c);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "k,cum_prob_labelling,cum_prob_partitioning");
    std::vector<std::string> rows;
    while (std::getline(in, line))
        rows.push_back(line);
    REQUIRE(rows.size() == 9);
    std::istringstream row(rows[1]);
    std::size_t k = 0;
    double lab = 0, prt = 0;
    char comma = 0;
    row >> k >> comma >> lab >> comma >> prt;
    CHECK(k == 2);
    CHECK(std::abs(lab - 0.49005) < 1e-12);
    CHECK(std::abs(prt - 0.9405) < 1e-12);
}
