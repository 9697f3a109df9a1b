#include "tiepart/assignment.hpp"

#include <algorithm>
#include <cmath>

namespace tiepart {

std::optional<ApSolution> solve_assignment(const SquareMatrix& cost)
{
    const std::size_t n = cost.size();
    const double inf = forbidden_arc;

    // 1-based potentials; column 0 is the virtual start of each augmenting path.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<std::size_t> owner(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1);

    for (std::size_t i = 1; i <= n; ++i) {
        owner[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = owner[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j])
                    continue;
                const double c = cost(i0 - 1, j - 1);
                if (std::isfinite(c)) {
                    const double cur = c - u[i0] - v[j];
                    if (cur < minv[j]) {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            if (j1 == 0)
                return std::nullopt;
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                }
                else
                    minv[j] -= delta;
            }
            j0 = j1;
        } while (owner[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    ApSolution sol;
    sol.assignment.assign(n, -1);
    for (std::size_t j = 1; j <= n; ++j)
        sol.assignment[owner[j] - 1] = static_cast<int>(j - 1);
    sol.row_potential.assign(u.begin() + 1, u.end());
    sol.col_potential.assign(v.begin() + 1, v.end());
    sol.reduced_cost = SquareMatrix(n, inf);
    for (std::size_t i = 0; i < n; ++i) {
        sol.lower_bound += cost(i, static_cast<std::size_t>(sol.assignment[i]));
        for (std::size_t j = 0; j < n; ++j)
            if (std::isfinite(cost(i, j)))
                sol.reduced_cost(i, j) = cost(i, j) - u[i + 1] - v[j + 1];
    }
    return sol;
}

} // namespace tiepart
