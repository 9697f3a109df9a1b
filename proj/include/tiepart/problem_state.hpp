#pragma once

#include "tiepart/domain.hpp"

#include <cstddef>
#include <deque>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tiepart {

class ProblemState;

enum class PropagationStatus { fixpoint, failure };

struct PropagationResult {
    PropagationStatus status = PropagationStatus::fixpoint;
    std::size_t removed = 0;

    bool failed() const { return status == PropagationStatus::failure; }
};

/// A filtering algorithm attached to a set of variables. propagate() removes
/// unsupported values through ProblemState::remove and returns false when it
/// detects that no solution exists under the current domains.
class Propagator {
public:
    virtual ~Propagator() = default;

    virtual std::vector<int> scope() const = 0;
    virtual bool propagate(ProblemState& state) = 0;
    virtual std::string name() const = 0;

    /// Called after every backtrack so cached data can be dropped.
    virtual void on_backtrack() {}
    /// An idempotent propagator is not re-queued by its own removals.
    virtual bool idempotent() const { return false; }
};

/// Variables, their domains and the propagators over them, with a trail of
/// removals so that every push_level()/pop_level() pair restores the domains
/// exactly.
class ProblemState {
public:
    explicit ProblemState(std::vector<Domain> domains);

    ProblemState(const ProblemState&) = delete;
    ProblemState& operator=(const ProblemState&) = delete;
    ProblemState(ProblemState&&) noexcept = default;
    ProblemState& operator=(ProblemState&&) noexcept = default;

    std::size_t num_vars() const { return domains_.size(); }
    const Domain& domain(int var) const { return domains_.at(static_cast<std::size_t>(var)); }
    const std::vector<Domain>& domains() const { return domains_; }
    bool all_bound() const;
    /// Value of every variable; requires all_bound().
    std::vector<int> assignment() const;

    void add_propagator(std::shared_ptr<Propagator> propagator);
    std::size_t num_propagators() const { return propagators_.size(); }

    /// x_var in allowed, followed by propagation to fixpoint. Throws
    /// std::invalid_argument unless allowed is a non-empty subset of the domain.
    PropagationResult restrict(int var, std::span<const int> allowed);
    PropagationResult propagate_fixpoint();

    /// Removes a value on behalf of a propagator. Returns false if the domain
    /// is now empty, which also puts the state into failure.
    bool remove(int var, int value);
    bool assign(int var, int value);
    void fail() { failed_ = true; }
    bool failed() const { return failed_; }

    std::size_t level() const { return level_marks_.size(); }
    void push_level();
    void pop_level();

private:
    void enqueue_watchers(int var);

    std::vector<Domain> domains_;
    std::vector<std::shared_ptr<Propagator>> propagators_;
    std::vector<std::vector<int>> watchers_;

    std::deque<int> queue_;
    std::vector<char> queued_;
    int running_ = -1;

    std::vector<std::pair<int, int>> trail_;
    std::vector<std::size_t> level_marks_;
    std::vector<bool> failed_marks_;
    bool failed_ = false;
    std::size_t removals_ = 0;
};

} // namespace tiepart
