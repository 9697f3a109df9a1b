#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

namespace tiepart {

inline constexpr double forbidden_arc = std::numeric_limits<double>::infinity();

/// Dense square matrix in row-major order.
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

    std::size_t size() const { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// Optimal linear assignment with its dual certificate.
struct ApSolution {
    /// assignment[i] is the column given to row i.
    std::vector<int> assignment;
    double lower_bound = 0.0;
    /// cost(i,j) - u_i - v_j; zero on assignment arcs, infinite on forbidden arcs.
    SquareMatrix reduced_cost;
    std::vector<double> row_potential;
    std::vector<double> col_potential;
};

/// Hungarian algorithm (shortest augmenting paths with potentials), O(n^3).
/// Forbidden arcs are +infinity. Returns std::nullopt when no assignment avoids
/// every forbidden arc.
std::optional<ApSolution> solve_assignment(const SquareMatrix& cost);

} // namespace tiepart
