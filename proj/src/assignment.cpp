#include "qsep/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace qsep {

namespace {

constexpr double kForbidden = 1e18;  // cost of a disallowed cell

// Classic Hungarian algorithm with potentials (minimization), rows <= cols.
// Only additions, subtractions and comparisons touch the costs, so integer
// inputs are handled exactly. Returns the minimal total cost.
double hungarian_min(std::size_t nl, std::size_t nr,
                     const std::vector<double>& cost,
                     std::vector<int>* col_of_row = nullptr) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(nl + 1, 0.0), v(nr + 1, 0.0);
    std::vector<std::size_t> p(nr + 1, 0), way(nr + 1, 0);
    for (std::size_t i = 1; i <= nl; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(nr + 1, inf);
        std::vector<char> used(nr + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            std::size_t j1 = 0;
            double delta = inf;
            for (std::size_t j = 1; j <= nr; ++j) {
                if (used[j]) continue;
                const double cur = cost[(i0 - 1) * nr + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= nr; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    double total = 0.0;
    if (col_of_row) col_of_row->assign(nl, -1);
    for (std::size_t j = 1; j <= nr; ++j) {
        if (p[j] == 0) continue;
        total += cost[(p[j] - 1) * nr + (j - 1)];
        if (col_of_row) (*col_of_row)[p[j] - 1] = static_cast<int>(j - 1);
    }
    return total;
}

struct Slot {
    std::size_t item;
    // right indices <= floor are disallowed for this slot (same-item
    // ordering constraint during lexicographic refinement); -1 means none
    long floor = -1;
};

// Best achievable total weight over the remaining expanded slots, columns
// restricted to `free_cols`. Returns -infinity-ish when infeasible.
double best_completion(const MatchingProblem& problem,
                       const std::vector<Slot>& slots,
                       const std::vector<std::size_t>& free_cols) {
    if (slots.empty()) return 0.0;
    const std::size_t nl = slots.size();
    const std::size_t nr = free_cols.size();
    std::vector<double> cost(nl * nr);
    for (std::size_t r = 0; r < nl; ++r)
        for (std::size_t c = 0; c < nr; ++c) {
            const std::size_t col = free_cols[c];
            const bool allowed = static_cast<long>(col) > slots[r].floor;
            cost[r * nr + c] =
                allowed ? -problem.weight(slots[r].item, col) : kForbidden;
        }
    const double total = hungarian_min(nl, nr, cost);
    if (total >= kForbidden / 2) return -kForbidden;  // needed a forbidden cell
    return -total;
}

}  // namespace

void MatchingProblem::validate() const {
    if (n_left < 1 || n_right < 1 || capacity < 1)
        throw ParameterRange("MatchingProblem: sizes must be >= 1");
    if (weights.size() != n_left * n_right)
        throw DimensionMismatch("MatchingProblem: weight matrix shape mismatch");
    if (n_left * capacity > n_right) {
        std::ostringstream msg;
        msg << "MatchingProblem: infeasible shape, " << n_left << " x "
            << capacity << " demands exceed " << n_right << " right items";
        throw ParameterRange(msg.str());
    }
    for (double w : weights)
        if (!std::isfinite(w))
            throw ParameterRange("MatchingProblem: weights must be finite");
}

Matching solve_exact(const MatchingProblem& problem) {
    problem.validate();
    const std::size_t n_exp = problem.n_left * problem.capacity;

    // optimum value from the expanded assignment problem
    std::vector<double> cost(n_exp * problem.n_right);
    for (std::size_t r = 0; r < n_exp; ++r)
        for (std::size_t b = 0; b < problem.n_right; ++b)
            cost[r * problem.n_right + b] =
                -problem.weight(r / problem.capacity, b);
    const double optimum = -hungarian_min(n_exp, problem.n_right, cost);
    const double tol = 1e-12 * std::max(1.0, std::abs(optimum));

    // lexicographic refinement: commit the smallest right index per slot
    // that still completes to the optimum; later same-item slots are then
    // restricted to larger indices, which pins the ascending set order.
    Matching out;
    out.assigned.assign(problem.n_left, {});
    std::vector<char> taken(problem.n_right, 0);
    double fixed = 0.0;
    for (std::size_t a = 0; a < problem.n_left; ++a) {
        long prev = -1;
        for (std::size_t k = 0; k < problem.capacity; ++k) {
            bool committed = false;
            for (std::size_t b = prev + 1; b < problem.n_right && !committed;
                 ++b) {
                if (taken[b]) continue;

                std::vector<Slot> rest;
                for (std::size_t kk = k + 1; kk < problem.capacity; ++kk)
                    rest.push_back({a, static_cast<long>(b)});
                for (std::size_t aa = a + 1; aa < problem.n_left; ++aa)
                    for (std::size_t kk = 0; kk < problem.capacity; ++kk)
                        rest.push_back({aa, -1});
                std::vector<std::size_t> free_cols;
                for (std::size_t c = 0; c < problem.n_right; ++c)
                    if (!taken[c] && c != b) free_cols.push_back(c);

                const double candidate = fixed + problem.weight(a, b) +
                                         best_completion(problem, rest,
                                                         free_cols);
                if (candidate >= optimum - tol) {
                    taken[b] = 1;
                    out.assigned[a].push_back(b);
                    fixed += problem.weight(a, b);
                    prev = static_cast<long>(b);
                    committed = true;
                }
            }
            if (!committed)
                throw Error("solve_exact: refinement failed to commit a slot");
        }
    }
    out.value = fixed;
    return out;
}

Matching solve_greedy(const MatchingProblem& problem) {
    problem.validate();
    struct Cell {
        double w;
        std::size_t a, b;
    };
    std::vector<Cell> cells;
    cells.reserve(problem.n_left * problem.n_right);
    for (std::size_t a = 0; a < problem.n_left; ++a)
        for (std::size_t b = 0; b < problem.n_right; ++b)
            cells.push_back({problem.weight(a, b), a, b});
    std::stable_sort(cells.begin(), cells.end(),
                     [](const Cell& x, const Cell& y) {
                         if (x.w != y.w) return x.w > y.w;
                         if (x.a != y.a) return x.a < y.a;
                         return x.b < y.b;
                     });

    Matching out;
    out.assigned.assign(problem.n_left, {});
    std::vector<char> taken(problem.n_right, 0);
    for (const Cell& cell : cells) {
        if (taken[cell.b]) continue;
        if (out.assigned[cell.a].size() >= problem.capacity) continue;
        taken[cell.b] = 1;
        out.assigned[cell.a].push_back(cell.b);
        out.value += cell.w;
    }
    for (auto& set : out.assigned) std::sort(set.begin(), set.end());
    return out;
}

std::vector<Matching> enumerate_matchings(const MatchingProblem& problem) {
    problem.validate();
    if (problem.n_right > 8 || problem.n_left * problem.capacity > 8)
        throw ParameterRange(
            "enumerate_matchings: guard exceeded (n_right <= 8 and "
            "n_left*capacity <= 8 required)");

    std::vector<Matching> all;
    Matching current;
    current.assigned.assign(problem.n_left, {});
    std::vector<char> taken(problem.n_right, 0);

    // choose ascending c-subsets per item, items in order
    auto recurse = [&](auto&& self, std::size_t a) -> void {
        if (a == problem.n_left) {
            all.push_back(current);
            return;
        }
        auto pick = [&](auto&& pick_self, std::size_t k, std::size_t from)
            -> void {
            if (k == problem.capacity) {
                self(self, a + 1);
                return;
            }
            for (std::size_t b = from; b < problem.n_right; ++b) {
                if (taken[b]) continue;
                taken[b] = 1;
                current.assigned[a].push_back(b);
                current.value += problem.weight(a, b);
                pick_self(pick_self, k + 1, b + 1);
                current.value -= problem.weight(a, b);
                current.assigned[a].pop_back();
                taken[b] = 0;
            }
        };
        pick(pick, 0, 0);
    };
    recurse(recurse, 0);
    return all;
}

}  // namespace qsep
