#pragma once

#include <string>
#include <vector>

#include "qsep/assignment.hpp"
#include "qsep/bipartite.hpp"
#include "qsep/linalg.hpp"
#include "qsep/measurements.hpp"

// Multipartite separability criteria over m-party states. The selection
// optimization no longer decomposes (each correlation term couples every
// party), so three strategies are offered: the canonical identity-order
// selection, exact per-party coordinate ascent, and guarded exhaustive
// search. Any strategy yields a sound detector: the bounds hold for every
// selection of a fully separable state, and a heuristic J only
// under-reports the maximum.

namespace qsep {

enum class Strategy { canonical, greedy, exhaustive };

const char* to_string(Strategy strategy);
Strategy strategy_from_string(const std::string& name);

struct MultipartiteParams {
    CriterionParams::Kind kind = CriterionParams::Kind::mum;
    std::size_t m = 0;                 // party count
    std::size_t d = 0;                 // min subsystem dimension
    std::size_t M = 0;                 // min measurement count (1 for GSIC)
    std::size_t outcome_slots = 0;     // d, or d^2 for GSIC
    std::vector<std::size_t> dims;     // d_k
    std::vector<std::size_t> counts;   // M_k (1 for GSIC)
    std::vector<std::size_t> outcomes; // per-measurement elements: d_k or d_k^2
    std::vector<std::size_t> s, t, r1, r2;
    std::vector<double> efficiency;    // kappa_k or a_k (1 for MUB)
};

MultipartiteParams th4_params(const std::vector<MUMFamily>& families);
MultipartiteParams th4_mub_params(const std::vector<MUBFamily>& families);
MultipartiteParams th4_gsic_params(const std::vector<GSICPOVM>& povms);

struct PartySelection {
    // meas[j][q] = this party's measurement index for slot (j, q);
    // indices distinct across the whole map
    std::vector<std::vector<std::size_t>> meas;
    // outs[j][q].assigned[i] = the s_k outcome indices for slot i, distinct
    // within the used measurement
    std::vector<std::vector<Matching>> outs;
};

struct MultiSelection {
    std::vector<PartySelection> parties;
};

struct MultiCriterionResult {
    std::string theorem;
    double lhs = 0.0;
    double bound = 0.0;    // verdicts use this (min of the two for T4)
    double bound1 = 0.0;   // mean-power bound (T4 only)
    double bound2 = 0.0;   // pairwise Cauchy-Schwarz bound
    bool violated = false;
    bool marginal = false;
    Strategy strategy = Strategy::canonical;
    MultiSelection selection;
    MultipartiteParams params;
    std::vector<std::string> notes;
};

MultiSelection canonical_multi_selection(const MultipartiteParams& params);

/// Correlation sum at a fixed selection (consistency checks, strategy
/// plumbing). POVM lists are per party.
double multi_selection_value(const DensityMatrix& rho,
                             const std::vector<std::vector<POVM>>& parties,
                             const MultipartiteParams& params,
                             const MultiSelection& sel);

MultiCriterionResult evaluate_th4(const DensityMatrix& rho,
                                  const std::vector<MUMFamily>& families,
                                  Strategy strategy = Strategy::greedy);
MultiCriterionResult evaluate_th4_mub(const DensityMatrix& rho,
                                      const std::vector<MUBFamily>& families,
                                      Strategy strategy = Strategy::greedy);
MultiCriterionResult evaluate_th4_gsic(const DensityMatrix& rho,
                                       const std::vector<GSICPOVM>& povms,
                                       Strategy strategy = Strategy::greedy);

}  // namespace qsep
