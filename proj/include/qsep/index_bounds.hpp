#pragma once

#include "qsep/linalg.hpp"
#include "qsep/measurements.hpp"

// Single-party index-sum relations the criteria proofs rest on, plus the
// divisor bookkeeping (d' = s d + r1, M' = t M + r2) shared by every
// theorem bound.

namespace qsep {

struct CriterionParams {
    enum class Kind { mum, mub, gsic };
    Kind kind = Kind::mum;

    std::size_t d = 0, d_prime = 0;
    std::size_t M = 0, M_prime = 0;
    std::size_t s = 0, t = 0, r1 = 0, r2 = 0;
    double kappa1 = 0.0, kappa2 = 0.0;  // MUM variant
    double a1 = 0.0, a2 = 0.0;          // GSIC variant; s from squared dims
};

CriterionParams mum_params(const MUMFamily& fam_a, const MUMFamily& fam_b);
CriterionParams mub_params(const MUBFamily& fam_a, const MUBFamily& fam_b);
CriterionParams gsic_params(const GSICPOVM& povm_a, const GSICPOVM& povm_b);

/// sum_b sum_n [Tr(P_n^(b) rho)]^2 over an arbitrary POVM list.
double povm_index_sum(const std::vector<POVM>& povms, const DensityMatrix& rho);

double mum_index_sum(const MUMFamily& family, const DensityMatrix& rho);

/// (M-1)/d + (1 - kappa + (kappa d - 1) purity)/(d - 1)
double mum_index_bound(std::size_t M, std::size_t d, double kappa,
                       double purity);

/// 1 + (M-1)/d
double mub_index_bound(std::size_t M, std::size_t d);

double gsic_index_sum(const GSICPOVM& povm, const DensityMatrix& rho);

/// ((a d^3 - 1) purity + d (1 - a d)) / (d (d^2 - 1)); agrees with
/// gsic_index_sum as an identity, not just a bound.
double gsic_index_value(double a, std::size_t d, double purity);

}  // namespace qsep
