#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tiepart {

/// A domain value with its heuristic score; higher ranks are tried first.
struct RankedValue {
    int value;
    double rank;
};

/// Values the heuristic considers equivalent, in ascending value order.
struct TieGroup {
    std::vector<int> values;
    double rank;
};

struct Branch {
    std::vector<int> allowed;
    int discrepancy;

    friend bool operator==(const Branch&, const Branch&) = default;
};

using BranchList = std::vector<Branch>;

enum class BranchMode { labelling, partitioning };

const char* to_string(BranchMode mode);

/// Sorts by rank (descending) and splits into maximal groups. With
/// equivalence_pct == 0 only identical ranks tie; otherwise a value joins the
/// current group when |rank - head| <= equivalence_pct * |head|, where head is
/// the rank of the group's first value.
std::vector<TieGroup> group_ties(std::span<const RankedValue> ranked, double equivalence_pct = 0.0);

/// One singleton branch per value; branch j carries discrepancy j.
BranchList labelling_branches(std::span<const TieGroup> groups);

/// One branch per tie group; a branch's discrepancy is the number of values
/// in the groups before it.
BranchList partitioning_branches(std::span<const TieGroup> groups);

BranchList make_branches(BranchMode mode, std::span<const TieGroup> groups);

} // namespace tiepart
