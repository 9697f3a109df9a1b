#pragma once

#include "tiepart/branchers.hpp"
#include "tiepart/search.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace tiepart::probsim {

/// Search tree of fixed depth and branch width, with the heuristic's success
/// probability for every branch. `tie_groups[level][j]` is the tie group of
/// branch j; group ids start at 0 and increase by at most one from branch to
/// branch, so groups are contiguous in heuristic order.
struct ProbTreeSpec {
    int depth = 0;
    int width = 0;
    std::vector<std::vector<double>> probs;
    std::vector<std::vector<int>> tie_groups;

    /// Throws std::invalid_argument when the probabilities do not sum to one,
    /// are not in heuristic order, or disagree with the tie structure.
    void validate() const;
    bool has_tie() const;
    std::uint64_t leaf_count() const;
};

using LeafPath = std::vector<int>;

struct LeafVisit {
    LeafPath path;
    double probability;
    int discrepancy;
};

struct CurvePoint {
    std::size_t k;
    double cumulative;
};

struct Curve {
    std::vector<CurvePoint> points;
};

double leaf_probability(const ProbTreeSpec& spec, std::span<const int> path);

/// Calls visit for each leaf in the order the strategy reaches it on the
/// labelling or partitioning tree, until visit returns false or cap leaves
/// have been produced. Leaves are generated lazily.
void enumerate_leaves(const ProbTreeSpec& spec, BranchMode mode, Strategy strategy, std::size_t cap,
                      const std::function<bool(const LeafVisit&)>& visit);

std::vector<LeafVisit> visit_order(const ProbTreeSpec& spec, BranchMode mode, Strategy strategy, std::size_t cap);

/// Success probabilities of the first cap leaves in visit order.
std::vector<double> ordered_leaves(const ProbTreeSpec& spec, BranchMode mode, Strategy strategy, std::size_t cap);

Curve cumulative_curve(std::span<const double> leaf_probs);

struct DominanceVerdict {
    bool pass = true;
    std::size_t leaves = 0;
    /// First prefix length where partitioning falls below labelling.
    std::optional<std::size_t> failing_k;
    double partitioning_sum = 0.0;
    double labelling_sum = 0.0;
    /// First prefix length where partitioning is strictly ahead.
    std::optional<std::size_t> first_strict_k;
};

inline constexpr double dominance_tolerance = 1e-12;

/// Compares the full labelling and partitioning leaf sequences prefix by
/// prefix. Throws std::length_error when the tree has more than max_leaves
/// leaves. `perturb` reverses the partitioning order (negative control).
DominanceVerdict verify_dominance(const ProbTreeSpec& spec, Strategy strategy, std::uint64_t max_leaves = 1u << 20,
                                  bool perturb = false);

/// Random spec with depth in [1, max_depth] and width in [1, max_width]. With
/// force_tie the spec has at least one tie (width >= 2).
ProbTreeSpec random_spec(std::mt19937_64& rng, int max_depth, int max_width, bool force_tie);

/// Level probabilities used for the depth-30 experiment: 0.95/0.04/0.01 for
/// untied levels and 0.495/0.495/0.01 for tied levels when width is 3; other
/// widths use a decreasing tail of the same shape.
std::vector<double> untied_level(int width);
std::vector<double> tied_level(int width);

/// Tie levels placed at floor(j * depth / t) for j < t, t = round(fraction * depth).
std::vector<int> even_tie_levels(int depth, double fraction);

ProbTreeSpec tree_with_ties(int depth, int width, std::span<const int> tie_levels);

struct CurvePair {
    Curve labelling;
    Curve partitioning;
};

CurvePair compare_curves(const ProbTreeSpec& spec, Strategy strategy, std::size_t cap);

/// Depth 30, width 3, evenly spread ties.
CurvePair depth30_experiment(double tie_fraction, Strategy strategy, std::size_t cap = 50000);

/// CSV with header `k,cum_prob_labelling,cum_prob_partitioning`.
void write_curves_csv(std::ostream& out, const CurvePair& curves);

} // namespace tiepart::probsim
