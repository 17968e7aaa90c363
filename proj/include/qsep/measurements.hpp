#pragma once

#include <string>
#include <vector>

#include "qsep/linalg.hpp"

// Construction and validation of the three measurement families the
// criteria consume: mutually unbiased bases (prime dimension), mutually
// unbiased measurements (any dimension, efficiency parameter kappa), and
// GSIC-POVMs (any dimension, efficiency parameter a). Constructions are
// recipe-based but never trusted: a family is only returned after its
// defining trace relations validate numerically.

namespace qsep {

struct POVM {
    std::size_t dim = 0;
    std::vector<HermitianOperator> elements;
};

struct MUMFamily {
    std::size_t dim = 0;
    double kappa = 0.0;
    std::vector<POVM> povms;

    std::size_t count() const { return povms.size(); }
};

struct MUBFamily {
    std::size_t dim = 0;
    // bases[k][i] is the i-th unit vector of basis k
    std::vector<std::vector<std::vector<cplx>>> bases;

    std::size_t count() const { return bases.size(); }
};

struct GSICPOVM {
    std::size_t dim = 0;
    double a = 0.0;
    std::vector<HermitianOperator> elements;  // d^2 of them
};

/// d^2-1 traceless Hermitian operators, orthonormal under Tr(F_i F_j).
/// Order: symmetric pairs, antisymmetric pairs, then diagonal; for MUM
/// building they are consumed as d+1 consecutive blocks of d-1.
struct OperatorBasis {
    std::size_t dim = 0;
    std::vector<ComplexMatrix> ops;
};

OperatorBasis gell_mann_basis(std::size_t d);

/// Complete set of d+1 MUBs; prime d only.
MUBFamily build_mubs(std::size_t d);

/// Complete set of d+1 MUMs at the requested kappa in (1/d, 1]. Throws
/// ConstructionError carrying the bisected maximum feasible kappa when
/// the request breaks positivity.
MUMFamily build_mums(std::size_t d, double kappa);

/// d^2-element GSIC-POVM at parameter a in (1/d^3, 1/d^2]; same
/// feasibility policy as build_mums.
GSICPOVM build_gsic(std::size_t d, double a);

struct ValidationEntry {
    std::string relation;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct ValidationReport {
    std::vector<ValidationEntry> entries;
    bool pass = true;

    void add(std::string relation, double residual, double tolerance);
};

ValidationReport validate_family(const MUMFamily& family);
ValidationReport validate_family(const MUBFamily& family);
ValidationReport validate_family(const GSICPOVM& povm);

/// Efficiency parameter recovered as the mean of Tr(P^2); throws if the
/// spread across elements exceeds 1e-8.
double measured_kappa(const MUMFamily& family);
double measured_a(const GSICPOVM& povm);

/// Rank-1 projector POVMs of a MUB family (used by the MUB criteria).
std::vector<POVM> povms_from_mub(const MUBFamily& family);

bool is_prime(std::size_t n);

}  // namespace qsep
