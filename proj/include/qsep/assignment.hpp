#pragma once

#include <cstddef>
#include <vector>

#include "qsep/config.hpp"

// Max-weight b-matching: every left item receives exactly `capacity`
// distinct right items and the chosen sets are pairwise disjoint. This is
// the combinatorial core of the criteria's selection maximization.
// Instances stay tiny (left items = measurements or outcomes, at most a
// dozen per side), so the exact solver favors determinism over asymptotics.

namespace qsep {

struct MatchingProblem {
    std::size_t n_left = 0;
    std::size_t n_right = 0;
    std::size_t capacity = 1;
    std::vector<double> weights;  // row-major n_left x n_right

    double weight(std::size_t a, std::size_t b) const {
        return weights[a * n_right + b];
    }
    void validate() const;
};

struct Matching {
    // assigned[a] holds `capacity` distinct right indices, ascending
    std::vector<std::vector<std::size_t>> assigned;
    double value = 0.0;
};

/// Globally optimal matching; among optima, the lexicographically smallest
/// assignment (flattened ascending per-item sets compared in item order).
Matching solve_exact(const MatchingProblem& problem);

/// Deterministic greedy sweep (weight desc, then left then right index).
/// Always feasible; value <= solve_exact value.
Matching solve_greedy(const MatchingProblem& problem);

/// Every feasible assignment exactly once, lexicographic order. Guarded:
/// requires n_right <= 8 and n_left * capacity <= 8.
std::vector<Matching> enumerate_matchings(const MatchingProblem& problem);

}  // namespace qsep
