#pragma once

#include "tiepart/branchers.hpp"
#include "tiepart/problem_state.hpp"

#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stop_token>
#include <vector>

namespace tiepart {

enum class Strategy { dfs, lds, dds };

const char* to_string(Strategy strategy);

/// Branch weights along a root-to-leaf path. Decisions taken inside a
/// partitioning sub-problem are recorded with weight 0.
struct DiscrepancyPath {
    int total = 0;
    std::vector<int> per_depth;
};

struct SearchLimits {
    std::optional<std::uint64_t> max_fails;
    std::optional<std::chrono::duration<double>> max_time;
    /// Objective value the caller stops at; the model's propagators enforce it.
    std::optional<long long> stop_at_objective;
    std::stop_token stop;
};

struct SearchStats {
    std::uint64_t fails = 0;
    std::uint64_t leaves = 0;
    std::uint64_t nodes = 0;
    std::optional<int> solution_discrepancy;
    double elapsed = 0.0;
    bool found = false;
    bool limit_reached = false;
    std::vector<int> solution;
};

/// Reported for every visited leaf, successful or not.
struct LeafEvent {
    std::vector<int> values;
    DiscrepancyPath path;
    bool solution;
};

/// Picks the next variable among those flagged in `eligible`, or nothing.
using VariableSelector = std::function<std::optional<int>(const ProblemState&, std::span<const char> eligible)>;
/// Scores the current domain values of a variable.
using ValueRanker = std::function<std::vector<RankedValue>(const ProblemState&, int var)>;

struct SearchModel {
    VariableSelector select_var;
    ValueRanker rank_values;
    double equivalence_pct = 0.0;
    bool stop_on_solution = true;
    std::function<void(const LeafEvent&)> on_leaf;
};

VariableSelector fixed_order(std::vector<int> order);
VariableSelector smallest_domain_first();
/// Ranks smaller values higher, so every value is its own tie group.
ValueRanker prefer_smaller_values();
/// Every value gets the same rank.
ValueRanker all_values_tied();

inline constexpr int unlimited_iterations = std::numeric_limits<int>::max();

/// Generic entry point. `max_iterations` bounds the discrepancy limit of LDS
/// or the depth bound of DDS and is ignored by DFS.
SearchStats search(ProblemState& state, const SearchModel& model, BranchMode mode, Strategy strategy,
                   const SearchLimits& limits = {}, int max_iterations = unlimited_iterations);

SearchStats dfs(ProblemState& state, const SearchModel& model, BranchMode mode, const SearchLimits& limits = {});
SearchStats lds(ProblemState& state, const SearchModel& model, BranchMode mode, const SearchLimits& limits = {},
                int max_discrepancy = unlimited_iterations);
SearchStats dds(ProblemState& state, const SearchModel& model, BranchMode mode, const SearchLimits& limits = {},
                int max_depth_iterations = unlimited_iterations);

/// Labelling DFS over the variables whose domains are not yet singletons.
/// Contributes no discrepancy.
SearchStats solve_subproblem(ProblemState& state, const SearchModel& model, const SearchLimits& limits = {});

} // namespace tiepart
