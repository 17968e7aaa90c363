#include "qsep/bipartite.hpp"

#include <cmath>
#include <sstream>

namespace qsep {

namespace {

Matching solve(const MatchingProblem& problem, Mode mode) {
    return mode == Mode::exact ? solve_exact(problem) : solve_greedy(problem);
}

void set_verdict(CriterionResult& result) {
    result.violated = result.lhs - result.bound > tols().violation;
    result.marginal = std::abs(result.lhs - result.bound) <= tols().marginal_band;
}

void check_state_shape(const DensityMatrix& rho, std::size_t dim_a,
                       std::size_t dim_b, const char* what) {
    if (rho.parties() != 2 || rho.dims()[0] != dim_a || rho.dims()[1] != dim_b) {
        std::ostringstream msg;
        msg << what << ": state dims (";
        for (std::size_t k = 0; k < rho.parties(); ++k)
            msg << (k ? "," : "") << rho.dims()[k];
        msg << ") do not match families (" << dim_a << "," << dim_b << ")";
        throw DimensionMismatch(msg.str());
    }
}

// contracted B-side elements: T_m = Tr_B((I (x) Q_m) X), one per element
std::vector<ComplexMatrix> contract_side_b(const ComplexMatrix& operand,
                                           const std::vector<std::size_t>& dims,
                                           const POVM& povm_b) {
    std::vector<ComplexMatrix> out;
    out.reserve(povm_b.elements.size());
    for (const auto& q : povm_b.elements)
        out.push_back(contract_last(operand, dims, q.mat()));
    return out;
}

MatchingProblem outcome_problem(const POVM& povm_a,
                                const std::vector<ComplexMatrix>& contracted,
                                std::size_t s, bool absolute) {
    MatchingProblem problem;
    problem.n_left = povm_a.elements.size();
    problem.n_right = contracted.size();
    problem.capacity = s;
    problem.weights.resize(problem.n_left * problem.n_right);
    for (std::size_t n = 0; n < problem.n_left; ++n)
        for (std::size_t m = 0; m < problem.n_right; ++m) {
            const double w =
                trace_pair(povm_a.elements[n].mat(), contracted[m]);
            problem.weights[n * problem.n_right + m] = absolute ? std::abs(w) : w;
        }
    return problem;
}

HermitianOperator delta_operand(const DensityMatrix& rho) {
    const auto rho_a = partial_trace(rho, {0});
    const auto rho_b = partial_trace(rho, {1});
    ComplexMatrix delta = rho.mat();
    delta -= tensor_product(rho_a.mat(), rho_b.mat());
    return HermitianOperator(std::move(delta));
}

}  // namespace

const char* to_string(Mode mode) {
    return mode == Mode::exact ? "exact" : "greedy";
}

Mode mode_from_string(const std::string& name) {
    if (name == "exact") return Mode::exact;
    if (name == "greedy") return Mode::greedy;
    throw ParameterRange("unknown mode: " + name);
}

PairValue pair_value(const POVM& povm_a, const POVM& povm_b,
                     const DensityMatrix& rho, std::size_t s, bool absolute,
                     const HermitianOperator* delta, Mode mode) {
    check_state_shape(rho, povm_a.dim, povm_b.dim, "pair_value");
    const ComplexMatrix& operand = delta ? delta->mat() : rho.mat();
    if (s * povm_a.elements.size() > povm_b.elements.size())
        throw ParameterRange("pair_value: s exceeds the B-outcome budget");
    const auto contracted = contract_side_b(operand, rho.dims(), povm_b);
    const auto matching =
        solve(outcome_problem(povm_a, contracted, s, absolute), mode);
    return {matching.value, matching};
}

JResult maximize_selection(const ComplexMatrix& operand,
                           const std::vector<std::size_t>& dims,
                           const std::vector<POVM>& side_a,
                           const std::vector<POVM>& side_b, std::size_t s,
                           std::size_t t, bool absolute, Mode mode) {
    const std::size_t m_a = side_a.size();
    const std::size_t m_b = side_b.size();

    std::vector<std::vector<Matching>> inner(m_a, std::vector<Matching>(m_b));
    MatchingProblem outer;
    outer.n_left = m_a;
    outer.n_right = m_b;
    outer.capacity = t;
    outer.weights.resize(m_a * m_b);
    for (std::size_t bq = 0; bq < m_b; ++bq) {
        const auto contracted = contract_side_b(operand, dims, side_b[bq]);
        for (std::size_t b = 0; b < m_a; ++b) {
            inner[b][bq] = solve(
                outcome_problem(side_a[b], contracted, s, absolute), mode);
            outer.weights[b * m_b + bq] = inner[b][bq].value;
        }
    }

    JResult out;
    out.selection.measurement_pairing = solve(outer, mode);
    out.value = out.selection.measurement_pairing.value;
    out.selection.outcome_pairing.resize(m_a);
    for (std::size_t b = 0; b < m_a; ++b)
        for (std::size_t bq : out.selection.measurement_pairing.assigned[b])
            out.selection.outcome_pairing[b].push_back(inner[b][bq]);
    return out;
}

JResult maximize_J(const DensityMatrix& rho, const MUMFamily& fam_a,
                   const MUMFamily& fam_b, Mode mode) {
    check_state_shape(rho, fam_a.dim, fam_b.dim, "maximize_J");
    const auto p = mum_params(fam_a, fam_b);
    return maximize_selection(rho.mat(), rho.dims(), fam_a.povms, fam_b.povms,
                              p.s, p.t, false, mode);
}

double selection_value(const ComplexMatrix& operand,
                       const std::vector<std::size_t>& dims,
                       const std::vector<POVM>& side_a,
                       const std::vector<POVM>& side_b, const Selection& sel,
                       bool absolute) {
    if (sel.measurement_pairing.assigned.size() != side_a.size() ||
        sel.outcome_pairing.size() != side_a.size())
        throw DimensionMismatch("selection_value: selection shape mismatch");

    double total = 0.0;
    for (std::size_t b = 0; b < side_a.size(); ++b) {
        const auto& partners = sel.measurement_pairing.assigned[b];
        if (partners.size() != sel.outcome_pairing[b].size())
            throw DimensionMismatch("selection_value: selection shape mismatch");
        for (std::size_t q = 0; q < partners.size(); ++q) {
            const std::size_t bq = partners[q];
            if (bq >= side_b.size())
                throw DimensionMismatch("selection_value: B index out of range");
            const auto contracted = contract_side_b(operand, dims, side_b[bq]);
            const auto& matching = sel.outcome_pairing[b][q];
            if (matching.assigned.size() != side_a[b].elements.size())
                throw DimensionMismatch(
                    "selection_value: outcome matching shape mismatch");
            for (std::size_t n = 0; n < matching.assigned.size(); ++n)
                for (std::size_t m : matching.assigned[n]) {
                    const double w = trace_pair(side_a[b].elements[n].mat(),
                                                contracted[m]);
                    total += absolute ? std::abs(w) : w;
                }
        }
    }
    return total;
}

Selection canonical_selection(std::size_t M, std::size_t t,
                              std::size_t outcomes_a, std::size_t s) {
    Selection sel;
    sel.measurement_pairing.assigned.resize(M);
    sel.outcome_pairing.resize(M);
    Matching outcomes;
    outcomes.assigned.resize(outcomes_a);
    for (std::size_t n = 0; n < outcomes_a; ++n)
        for (std::size_t p = 0; p < s; ++p)
            outcomes.assigned[n].push_back(n * s + p);
    for (std::size_t b = 0; b < M; ++b) {
        for (std::size_t q = 0; q < t; ++q) {
            sel.measurement_pairing.assigned[b].push_back(b * t + q);
            sel.outcome_pairing[b].push_back(outcomes);
        }
    }
    return sel;
}

double th1_bound(const CriterionParams& p) {
    return 0.5 * static_cast<double>(p.t * p.s) *
               ((p.M - 1.0) / p.d + p.kappa1) +
           0.5 * ((p.M_prime - 1.0) / p.d_prime + p.kappa2);
}

double th2_bound(const CriterionParams& p) {
    return std::sqrt(static_cast<double>(p.t * p.s) *
                     ((p.M - 1.0) / p.d + p.kappa1)) *
           std::sqrt((p.M_prime - 1.0) / p.d_prime + p.kappa2);
}

double th2_mub_bound(const CriterionParams& p) {
    return std::sqrt(static_cast<double>(p.t * p.s) *
                     (1.0 + (p.M - 1.0) / p.d)) *
           std::sqrt(1.0 + (p.M_prime - 1.0) / p.d_prime);
}

double th2_gsic_bound(const CriterionParams& p) {
    const double d = static_cast<double>(p.d);
    const double dp = static_cast<double>(p.d_prime);
    return std::sqrt(p.s * (p.a1 * d * d + 1.0) / (d * (d + 1.0))) *
           std::sqrt((p.a2 * dp * dp + 1.0) / (dp * (dp + 1.0)));
}

double sr_bound(const CriterionParams& p) {
    if (p.M != p.M_prime)
        throw ParameterRange("sr_bound: requires M = M'");
    return 0.5 * p.s *
           (((p.M - 1.0) / p.d + p.kappa1) +
            ((p.M - 1.0) / p.d_prime + p.kappa2));
}

CriterionResult evaluate_th1(const DensityMatrix& rho, const MUMFamily& fam_a,
                             const MUMFamily& fam_b, Mode mode) {
    check_state_shape(rho, fam_a.dim, fam_b.dim, "evaluate_th1");
    CriterionResult result;
    result.theorem = "T1";
    result.params = mum_params(fam_a, fam_b);
    auto j = maximize_J(rho, fam_a, fam_b, mode);
    result.lhs = j.value;
    result.selection = std::move(j.selection);
    result.bound = th1_bound(result.params);
    set_verdict(result);
    return result;
}

CriterionResult evaluate_th2(const DensityMatrix& rho, const MUMFamily& fam_a,
                             const MUMFamily& fam_b, Mode mode) {
    CriterionResult result = evaluate_th1(rho, fam_a, fam_b, mode);
    result.theorem = "T2";
    result.bound = th2_bound(result.params);
    set_verdict(result);
    return result;
}

CriterionResult evaluate_sr(const DensityMatrix& rho, const MUMFamily& fam_a,
                            const MUMFamily& fam_b, Mode mode) {
    check_state_shape(rho, fam_a.dim, fam_b.dim, "evaluate_sr");
    if (fam_b.count() < fam_a.count())
        throw DimensionMismatch("evaluate_sr: fewer B than A measurements");
    MUMFamily truncated = fam_b;
    truncated.povms.resize(fam_a.count());

    CriterionResult result;
    result.theorem = "SR-T2";
    result.params = mum_params(fam_a, truncated);
    auto j = maximize_J(rho, fam_a, truncated, mode);
    result.lhs = j.value;
    result.selection = std::move(j.selection);
    result.bound = sr_bound(result.params);
    set_verdict(result);
    if (fam_b.count() != fam_a.count()) {
        std::ostringstream note;
        note << "B family truncated from " << fam_b.count() << " to "
             << fam_a.count() << " measurements (prior bound needs M = M')";
        result.notes.push_back(note.str());
    }
    return result;
}

CriterionResult evaluate_mub(const DensityMatrix& rho, const MUBFamily& fam_a,
                             const MUBFamily& fam_b, Mode mode) {
    check_state_shape(rho, fam_a.dim, fam_b.dim, "evaluate_mub");
    CriterionResult result;
    result.theorem = "T2-MUB";
    result.params = mub_params(fam_a, fam_b);
    auto j = maximize_selection(rho.mat(), rho.dims(), povms_from_mub(fam_a),
                                povms_from_mub(fam_b), result.params.s,
                                result.params.t, false, mode);
    result.lhs = j.value;
    result.selection = std::move(j.selection);
    result.bound = th2_mub_bound(result.params);
    set_verdict(result);
    return result;
}

CriterionResult evaluate_gsic(const DensityMatrix& rho, const GSICPOVM& povm_a,
                              const GSICPOVM& povm_b, Mode mode) {
    check_state_shape(rho, povm_a.dim, povm_b.dim, "evaluate_gsic");
    CriterionResult result;
    result.theorem = "T2-GSIC";
    result.params = gsic_params(povm_a, povm_b);

    POVM side_a{povm_a.dim, povm_a.elements};
    POVM side_b{povm_b.dim, povm_b.elements};
    auto j = maximize_selection(rho.mat(), rho.dims(), {side_a}, {side_b},
                                result.params.s, 1, false, mode);
    result.lhs = j.value;
    result.selection = std::move(j.selection);
    result.bound = th2_gsic_bound(result.params);
    set_verdict(result);
    return result;
}

CriterionResult evaluate_th3(const DensityMatrix& rho, const MUMFamily& fam_a,
                             const MUMFamily& fam_b, Mode mode,
                             const Selection* fixed) {
    check_state_shape(rho, fam_a.dim, fam_b.dim, "evaluate_th3");
    CriterionResult result;
    result.theorem = "T3";
    result.params = mum_params(fam_a, fam_b);

    const auto delta = delta_operand(rho);
    if (fixed) {
        result.lhs = selection_value(delta.mat(), rho.dims(), fam_a.povms,
                                     fam_b.povms, *fixed, true);
        result.selection = *fixed;
        result.notes.push_back("S evaluated at a caller-fixed selection");
    } else {
        auto j = maximize_selection(delta.mat(), rho.dims(), fam_a.povms,
                                    fam_b.povms, result.params.s,
                                    result.params.t, true, mode);
        result.lhs = j.value;
        result.selection = std::move(j.selection);
    }

    const auto rho_a = partial_trace(rho, {0});
    const auto rho_b = partial_trace(rho, {1});
    double rad_a = (result.params.M - 1.0) / result.params.d +
                   result.params.kappa1 - mum_index_sum(fam_a, rho_a);
    double rad_b = (result.params.M_prime - 1.0) / result.params.d_prime +
                   result.params.kappa2 - mum_index_sum(fam_b, rho_b);
    for (double* rad : {&rad_a, &rad_b}) {
        if (*rad < 0.0) {
            if (*rad < -tols().violation) {
                std::ostringstream note;
                note << "negative bound radicand " << *rad
                     << " clamped to zero";
                result.notes.push_back(note.str());
            }
            *rad = 0.0;
        }
    }
    result.bound = std::sqrt(static_cast<double>(result.params.t *
                                                 result.params.s) *
                             rad_a) *
                   std::sqrt(rad_b);
    set_verdict(result);
    return result;
}

}  // namespace qsep
