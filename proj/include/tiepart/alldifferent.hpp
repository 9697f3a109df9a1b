#pragma once

#include "tiepart/problem_state.hpp"

#include <optional>
#include <span>
#include <vector>

namespace tiepart {

/// Hyper-arc consistent filtering for alldifferent: keeps exactly the values
/// that take part in some injective assignment. Returns std::nullopt when no
/// such assignment exists. Throws std::invalid_argument on an empty scope.
std::optional<std::vector<Domain>> alldifferent_filter(std::span<const Domain> domains);

/// Matching-based alldifferent propagator. The matching found at one call is
/// reused as the starting point of the next call within the same search node
/// and is discarded on backtrack.
class AllDifferent final : public Propagator {
public:
    explicit AllDifferent(std::vector<int> vars);

    std::vector<int> scope() const override { return vars_; }
    bool propagate(ProblemState& state) override;
    std::string name() const override { return "alldifferent"; }
    void on_backtrack() override { cached_.clear(); }
    bool idempotent() const override { return true; }

private:
    std::vector<int> vars_;
    std::vector<int> cached_;
};

/// Pairwise x_i != x_j decomposition: removes a bound variable's value from
/// the others. Weaker than AllDifferent; kept for comparison runs.
class PairwiseNotEqual final : public Propagator {
public:
    explicit PairwiseNotEqual(std::vector<int> vars);

    std::vector<int> scope() const override { return vars_; }
    bool propagate(ProblemState& state) override;
    std::string name() const override { return "alldifferent-pairwise"; }

private:
    std::vector<int> vars_;
};

} // namespace tiepart
