#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "qsep/config.hpp"

// Dense complex matrices and the quantum-specific primitives (tensor
// product, partial trace, partial transpose, PSD tests) the criteria are
// built on. Dimensions of interest stay small (total Hilbert space well
// under 100), so everything is dense and eager.

namespace qsep {

using cplx = std::complex<double>;

class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);

    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return entries_.size(); }

    cplx& operator()(std::size_t i, std::size_t j) {
        return entries_[i * cols_ + j];
    }
    const cplx& operator()(std::size_t i, std::size_t j) const {
        return entries_[i * cols_ + j];
    }

    /// Row-major contiguous storage.
    cplx* data() { return entries_.data(); }
    const cplx* data() const { return entries_.data(); }
    const cplx* row(std::size_t i) const { return entries_.data() + i * cols_; }

    ComplexMatrix adjoint() const;
    cplx trace() const;
    double frobenius_norm() const;
    double max_abs() const;
    /// max entry of |A - A^dag|; square matrices only.
    double hermiticity_defect() const;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(cplx factor);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) {
        a += b;
        return a;
    }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) {
        a -= b;
        return a;
    }
    friend ComplexMatrix operator*(cplx factor, ComplexMatrix m) {
        m *= factor;
        return m;
    }

    bool operator==(const ComplexMatrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> entries_;
};

/// Kronecker product, a-major block order: entry (i*rb+k, j*cb+l) = a(i,j)*b(k,l).
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// Square matrix validated Hermitian (within tols().hermiticity) at construction.
class HermitianOperator {
public:
    explicit HermitianOperator(ComplexMatrix m);

    std::size_t dim() const { return mat_.rows(); }
    const ComplexMatrix& mat() const { return mat_; }

private:
    ComplexMatrix mat_;
};

/// Unit-trace PSD Hermitian operator on a composite space with named
/// subsystem dimensions.
class DensityMatrix {
public:
    DensityMatrix(std::vector<std::size_t> dims, HermitianOperator op);

    const std::vector<std::size_t>& dims() const { return dims_; }
    std::size_t total_dim() const { return op_.dim(); }
    std::size_t parties() const { return dims_.size(); }
    const HermitianOperator& op() const { return op_; }
    const ComplexMatrix& mat() const { return op_.mat(); }

private:
    std::vector<std::size_t> dims_;
    HermitianOperator op_;
};

/// Reduced state on the subsystems listed in `keep` (ascending order kept).
DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<std::size_t>& keep);

/// Transpose the listed subsystems' indices. `transposed` must be a proper
/// nonempty subset of the parties (a bipartition cut).
HermitianOperator partial_transpose(const DensityMatrix& rho,
                                    const std::vector<std::size_t>& transposed);

/// Eigenvalues of (A + A^dag)/2, ascending.
std::vector<double> eigenvalues(const HermitianOperator& op);
double min_eigenvalue(const HermitianOperator& op);

/// Tr(rho^2), in [1/dim, 1] for valid states.
double purity(const DensityMatrix& rho);

/// Tr(a*b) for Hermitian operators; throws if the imaginary residue
/// exceeds the equality tolerance (scaled by the operand norms).
double hs_inner(const HermitianOperator& a, const HermitianOperator& b);

/// Same pairing on raw matrices; caller guarantees Hermiticity.
double trace_pair(const ComplexMatrix& a, const ComplexMatrix& b);

/// Tr over the last subsystem of (I (x) op) * x — the partial contraction
/// behind every Tr(P (x) Q rho) evaluation. `dims` describes x; the result
/// lives on dims minus the last entry (or 1x1 when x is single-party).
ComplexMatrix contract_last(const ComplexMatrix& x,
                            const std::vector<std::size_t>& dims,
                            const ComplexMatrix& op);

/// Same contraction over the first subsystem: Tr_1((op (x) I) x).
ComplexMatrix contract_first(const ComplexMatrix& x,
                             const std::vector<std::size_t>& dims,
                             const ComplexMatrix& op);

}  // namespace qsep
