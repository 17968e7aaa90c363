#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qsep/assignment.hpp"
#include "qsep/index_bounds.hpp"
#include "qsep/linalg.hpp"
#include "qsep/measurements.hpp"

// Bipartite separability criteria: the correlation functional J (or its
// marginal-corrected variant S) maximized over admissible selections, and
// the bounds it must respect on separable states. A violated bound
// certifies entanglement; satisfaction proves nothing.
//
// The selection maximization decomposes exactly: outcome matchings for
// distinct measurement pairs share no constraints, so the M x M' table of
// inner matching values feeds one outer matching over measurements.

namespace qsep {

enum class Mode { exact, greedy };

const char* to_string(Mode mode);
Mode mode_from_string(const std::string& name);

struct Selection {
    // assigned[b] = the t B-measurement indices paired with A-measurement b
    Matching measurement_pairing;
    // outcome_pairing[b][q] = outcome matching used with B-measurement
    // measurement_pairing.assigned[b][q]
    std::vector<std::vector<Matching>> outcome_pairing;
};

struct CriterionResult {
    std::string theorem;
    double lhs = 0.0;
    double bound = 0.0;
    bool violated = false;
    bool marginal = false;
    Selection selection;
    CriterionParams params;
    std::vector<std::string> notes;
};

/// Best outcome matching for one measurement pair: weights
/// w(n, m) = Tr(P_n (x) Q_m X) with X the state or a delta operand
/// (absolute: |w|), each A-outcome taking s distinct B-outcomes.
struct PairValue {
    double value = 0.0;
    Matching matching;
};
PairValue pair_value(const POVM& povm_a, const POVM& povm_b,
                     const DensityMatrix& rho, std::size_t s,
                     bool absolute = false,
                     const HermitianOperator* delta = nullptr,
                     Mode mode = Mode::exact);

struct JResult {
    double value = 0.0;
    Selection selection;
};

/// Two-level selection maximization over POVM lists (capacity t over
/// measurements, capacity s over outcomes within each used pair).
JResult maximize_selection(const ComplexMatrix& operand,
                           const std::vector<std::size_t>& dims,
                           const std::vector<POVM>& side_a,
                           const std::vector<POVM>& side_b, std::size_t s,
                           std::size_t t, bool absolute, Mode mode);

/// J(rho) for two MUM families (the t1 and t2 criteria share it).
JResult maximize_J(const DensityMatrix& rho, const MUMFamily& fam_a,
                   const MUMFamily& fam_b, Mode mode);

/// Value of the correlation sum at a caller-fixed selection.
double selection_value(const ComplexMatrix& operand,
                       const std::vector<std::size_t>& dims,
                       const std::vector<POVM>& side_a,
                       const std::vector<POVM>& side_b, const Selection& sel,
                       bool absolute);

/// Identity-order selection: measurement b takes B-measurements
/// b*t..b*t+t-1, outcome n takes B-outcomes n*s..n*s+s-1.
Selection canonical_selection(std::size_t M, std::size_t t,
                              std::size_t outcomes_a, std::size_t s);

double th1_bound(const CriterionParams& p);
double th2_bound(const CriterionParams& p);
double th2_mub_bound(const CriterionParams& p);
double th2_gsic_bound(const CriterionParams& p);
/// Prior bound for the head-to-head comparison; requires M = M'.
double sr_bound(const CriterionParams& p);

CriterionResult evaluate_th1(const DensityMatrix& rho, const MUMFamily& fam_a,
                             const MUMFamily& fam_b, Mode mode = Mode::exact);
CriterionResult evaluate_th2(const DensityMatrix& rho, const MUMFamily& fam_a,
                             const MUMFamily& fam_b, Mode mode = Mode::exact);
/// The comparison criterion: fam_b truncated to the first M measurements
/// so both sides use M = M' as the prior bound requires.
CriterionResult evaluate_sr(const DensityMatrix& rho, const MUMFamily& fam_a,
                            const MUMFamily& fam_b, Mode mode = Mode::exact);
CriterionResult evaluate_mub(const DensityMatrix& rho, const MUBFamily& fam_a,
                             const MUBFamily& fam_b, Mode mode = Mode::exact);
CriterionResult evaluate_gsic(const DensityMatrix& rho, const GSICPOVM& povm_a,
                              const GSICPOVM& povm_b, Mode mode = Mode::exact);
/// The t3 criterion: S over rho - rho_A (x) rho_B against the
/// marginal-corrected bound. Maximizes over selections by default (sound:
/// the bound holds for every selection of a separable state); pass `fixed`
/// to pin one.
CriterionResult evaluate_th3(const DensityMatrix& rho, const MUMFamily& fam_a,
                             const MUMFamily& fam_b, Mode mode = Mode::exact,
                             const Selection* fixed = nullptr);

}  // namespace qsep
