#pragma once

#include "tiepart/assignment.hpp"
#include "tiepart/branchers.hpp"
#include "tiepart/problem_state.hpp"
#include "tiepart/search.hpp"

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tiepart::tsp {

/// Symmetric instance with integer costs and a zero diagonal.
struct TspInstance {
    std::string name;
    int n = 0;
    std::vector<long long> cost;

    long long at(int i, int j) const { return cost[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)]; }
    void validate() const;
};

class TsplibError : public std::runtime_error {
public:
    TsplibError(int line, const std::string& message);
    int line() const { return line_; }

private:
    int line_;
};

/// Reads TYPE: TSP files with EDGE_WEIGHT_TYPE: EXPLICIT and one of the
/// FULL_MATRIX, LOWER_DIAG_ROW, UPPER_ROW, UPPER_DIAG_ROW or LOWER_ROW
/// weight formats.
TspInstance parse_tsplib(std::string_view text);
TspInstance read_tsplib_file(const std::filesystem::path& path);

long long tour_cost(const TspInstance& instance, const std::vector<int>& successor);
/// City sequence starting at 0 from a successor assignment.
std::vector<int> tour_from_successors(const std::vector<int>& successor);

/// Removes, for every chain of bound successor variables that does not yet
/// cover all cities, the arc that would close it into a cycle. Fails when the
/// bound arcs already contain a short cycle.
class NoSubtour final : public Propagator {
public:
    explicit NoSubtour(int n);

    std::vector<int> scope() const override;
    bool propagate(ProblemState& state) override;
    std::string name() const override { return "no-subtour"; }

private:
    int n_;
};

/// Assignment relaxation over the current successor domains. Fails when the
/// relaxation is infeasible or its bound exceeds the threshold; optionally
/// removes arcs whose reduced cost pushes the bound past the threshold.
class AssignmentBound final : public Propagator {
public:
    AssignmentBound(const TspInstance& instance, long long threshold, bool filter_arcs);

    std::vector<int> scope() const override;
    bool propagate(ProblemState& state) override;
    std::string name() const override { return "assignment-bound"; }

    void set_threshold(long long threshold) { threshold_ = threshold; }
    long long threshold() const { return threshold_; }

private:
    const TspInstance& instance_;
    long long threshold_;
    bool filter_arcs_;
};

/// Cost matrix of the assignment relaxation under the current domains.
SquareMatrix relaxation_costs(const TspInstance& instance, const ProblemState& state);

/// Rank of successor j for city var is -reduced_cost(var, j).
std::vector<RankedValue> reduced_cost_ranks(const ProblemState& state, const ApSolution& ap, int var);

/// Same, solving the relaxation on the current domains first.
ValueRanker reduced_cost_ranker(const TspInstance& instance);

/// Follows the bound chain from city 0 and branches on its open end; falls
/// back to the lowest-numbered eligible city.
VariableSelector chain_order();

/// Successor variables with alldifferent and no-subtour propagation.
ProblemState successor_model(const TspInstance& instance);

struct TspOptions {
    bool filter_arcs = true;
    double equivalence_pct = 0.0;
};

struct TspRun {
    SearchStats stats;
    std::optional<long long> cost;
    std::vector<int> tour;
};

/// Searches for a tour of cost at most stop_at and stops at the first one.
TspRun solve_tsp(const TspInstance& instance, BranchMode mode, Strategy strategy, long long stop_at,
                 const SearchLimits& limits = {}, const TspOptions& options = {});

struct OptimumResult {
    long long cost = 0;
    std::vector<int> tour;
    bool proven = false;
    SearchStats stats;
};

/// Depth-first branch and bound with the assignment bound, seeded with a
/// nearest-neighbour tour. `proven` is false when limits stopped the search.
OptimumResult find_optimal_tour(const TspInstance& instance, const SearchLimits& limits = {});

long long nearest_neighbour_cost(const TspInstance& instance);

} // namespace tiepart::tsp
