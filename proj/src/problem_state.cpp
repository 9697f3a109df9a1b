#include "tiepart/problem_state.hpp"

#include <algorithm>
#include <stdexcept>

namespace tiepart {

ProblemState::ProblemState(std::vector<Domain> domains) :
    domains_(std::move(domains)),
    watchers_(domains_.size())
{
    failed_ = std::any_of(domains_.begin(), domains_.end(), [](const Domain& d) { return d.empty(); });
}

bool ProblemState::all_bound() const
{
    return std::all_of(domains_.begin(), domains_.end(), [](const Domain& d) { return d.is_singleton(); });
}

std::vector<int> ProblemState::assignment() const
{
    std::vector<int> out;
    out.reserve(domains_.size());
    for (const auto& d : domains_) {
        if (!d.is_singleton())
            throw std::logic_error("assignment() requires every variable to be bound");
        out.push_back(d.value());
    }
    return out;
}

void ProblemState::add_propagator(std::shared_ptr<Propagator> propagator)
{
    const int id = static_cast<int>(propagators_.size());
    for (int var : propagator->scope()) {
        if (var < 0 || static_cast<std::size_t>(var) >= domains_.size())
            throw std::out_of_range("propagator scope refers to an unknown variable");
        auto& w = watchers_[static_cast<std::size_t>(var)];
        if (std::find(w.begin(), w.end(), id) == w.end())
            w.push_back(id);
    }
    propagators_.push_back(std::move(propagator));
    queued_.push_back(1);
    queue_.push_back(id);
}

PropagationResult ProblemState::restrict(int var, std::span<const int> allowed)
{
    const auto& dom = domain(var);
    if (allowed.empty())
        throw std::invalid_argument("restrict(): allowed set is empty");
    for (int v : allowed)
        if (!dom.contains(v))
            throw std::invalid_argument("restrict(): allowed set is not a subset of the domain");

    const std::size_t before = removals_;
    if (failed_)
        return {PropagationStatus::failure, 0};

    for (int v : dom.values())
        if (std::find(allowed.begin(), allowed.end(), v) == allowed.end())
            remove(var, v);

    auto result = propagate_fixpoint();
    result.removed = removals_ - before;
    return result;
}

PropagationResult ProblemState::propagate_fixpoint()
{
    const std::size_t before = removals_;
    while (!failed_ && !queue_.empty()) {
        const int id = queue_.front();
        queue_.pop_front();
        queued_[static_cast<std::size_t>(id)] = 0;
        running_ = id;
        const bool ok = propagators_[static_cast<std::size_t>(id)]->propagate(*this);
        running_ = -1;
        if (!ok)
            failed_ = true;
    }
    return {failed_ ? PropagationStatus::failure : PropagationStatus::fixpoint, removals_ - before};
}

bool ProblemState::remove(int var, int value)
{
    auto& dom = domains_.at(static_cast<std::size_t>(var));
    if (dom.remove(value)) {
        trail_.emplace_back(var, value);
        ++removals_;
        enqueue_watchers(var);
        if (dom.empty())
            failed_ = true;
    }
    return !dom.empty();
}

bool ProblemState::assign(int var, int value)
{
    if (!domain(var).contains(value)) {
        failed_ = true;
        return false;
    }
    for (int v : domain(var).values())
        if (v != value)
            remove(var, v);
    return true;
}

void ProblemState::enqueue_watchers(int var)
{
    for (int id : watchers_[static_cast<std::size_t>(var)]) {
        if (queued_[static_cast<std::size_t>(id)])
            continue;
        if (id == running_ && propagators_[static_cast<std::size_t>(id)]->idempotent())
            continue;
        queued_[static_cast<std::size_t>(id)] = 1;
        queue_.push_back(id);
    }
}

void ProblemState::push_level()
{
    level_marks_.push_back(trail_.size());
    failed_marks_.push_back(failed_);
}

void ProblemState::pop_level()
{
    if (level_marks_.empty())
        throw std::logic_error("pop_level() without matching push_level()");
    const std::size_t mark = level_marks_.back();
    level_marks_.pop_back();
    while (trail_.size() > mark) {
        const auto [var, value] = trail_.back();
        trail_.pop_back();
        domains_[static_cast<std::size_t>(var)].restore(value);
    }
    failed_ = failed_marks_.back();
    failed_marks_.pop_back();
    queue_.clear();
    std::fill(queued_.begin(), queued_.end(), 0);
    for (auto& p : propagators_)
        p->on_backtrack();
}

} // namespace tiepart
