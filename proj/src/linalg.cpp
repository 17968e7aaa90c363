#include "qsep/linalg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qsep/kernels.hpp"

namespace qsep {

namespace {

std::size_t product(const std::vector<std::size_t>& dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                           std::multiplies<>());
}

std::vector<std::size_t> strides_of(const std::vector<std::size_t>& dims) {
    std::vector<std::size_t> s(dims.size());
    std::size_t acc = 1;
    for (std::size_t k = dims.size(); k-- > 0;) {
        s[k] = acc;
        acc *= dims[k];
    }
    return s;
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {
    if (rows < 1 || cols < 1)
        throw ParameterRange("ComplexMatrix: rows and cols must be >= 1");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            out(j, i) = std::conj((*this)(i, j));
    return out;
}

cplx ComplexMatrix::trace() const {
    if (rows_ != cols_) throw DimensionMismatch("trace: matrix not square");
    cplx t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    return std::sqrt(kernels::active().sum_abs2(data(), size()));
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const cplx& z : entries_) m = std::max(m, std::abs(z));
    return m;
}

double ComplexMatrix::hermiticity_defect() const {
    if (rows_ != cols_)
        throw DimensionMismatch("hermiticity_defect: matrix not square");
    double defect = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i; j < cols_; ++j)
            defect = std::max(
                defect, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return defect;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw DimensionMismatch("matrix addition: shape mismatch");
    kernels::active().axpy(1.0, other.data(), data(), size());
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw DimensionMismatch("matrix subtraction: shape mismatch");
    kernels::active().axpy(-1.0, other.data(), data(), size());
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx factor) {
    kernels::active().scale(factor, data(), data(), size());
    return *this;
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    const auto& ops = kernels::active();
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < b.rows(); ++k) {
            cplx* out_row = out.data() + (i * b.rows() + k) * out.cols();
            for (std::size_t j = 0; j < a.cols(); ++j)
                ops.scale(a(i, j), b.row(k), out_row + j * b.cols(), b.cols());
        }
    return out;
}

HermitianOperator::HermitianOperator(ComplexMatrix m) : mat_(std::move(m)) {
    if (mat_.rows() != mat_.cols())
        throw DimensionMismatch("HermitianOperator: matrix not square");
    const double defect = mat_.hermiticity_defect();
    if (defect > tols().hermiticity) {
        std::ostringstream msg;
        msg << "HermitianOperator: defect " << defect << " exceeds tolerance";
        throw ParameterRange(msg.str());
    }
}

DensityMatrix::DensityMatrix(std::vector<std::size_t> dims, HermitianOperator op)
    : dims_(std::move(dims)), op_(std::move(op)) {
    if (dims_.empty()) throw DimensionMismatch("DensityMatrix: empty dims");
    for (std::size_t d : dims_)
        if (d < 1) throw DimensionMismatch("DensityMatrix: dims must be >= 1");
    if (product(dims_) != op_.dim())
        throw DimensionMismatch("DensityMatrix: dims do not match matrix size");
    const double tr = op_.mat().trace().real();
    if (std::abs(tr - 1.0) > tols().trace_slack) {
        std::ostringstream msg;
        msg << "DensityMatrix: trace " << tr << " is not 1";
        throw ParameterRange(msg.str());
    }
    const double lambda = min_eigenvalue(op_);
    if (lambda < -tols().psd_slack) {
        std::ostringstream msg;
        msg << "DensityMatrix: negative eigenvalue " << lambda;
        throw ParameterRange(msg.str());
    }
}

DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<std::size_t>& keep) {
    const auto& dims = rho.dims();
    std::vector<std::size_t> kept = keep;
    std::sort(kept.begin(), kept.end());
    if (kept.empty() || std::unique(kept.begin(), kept.end()) != kept.end() ||
        kept.back() >= dims.size())
        throw ParameterRange("partial_trace: invalid subsystem index set");

    std::vector<std::size_t> traced;
    for (std::size_t k = 0; k < dims.size(); ++k)
        if (!std::binary_search(kept.begin(), kept.end(), k)) traced.push_back(k);

    const auto strides = strides_of(dims);

    // flat offsets contributed by each group's multi-index
    auto offsets_for = [&](const std::vector<std::size_t>& parties) {
        std::size_t n = 1;
        for (std::size_t p : parties) n *= dims[p];
        std::vector<std::size_t> offs(n, 0);
        std::size_t repeat = n;
        for (std::size_t p : parties) {
            repeat /= dims[p];
            for (std::size_t idx = 0; idx < n; ++idx)
                offs[idx] += ((idx / repeat) % dims[p]) * strides[p];
        }
        return offs;
    };
    const auto keep_offs = offsets_for(kept);
    const auto traced_offs = offsets_for(traced);

    const std::size_t nk = keep_offs.size();
    ComplexMatrix out(nk, nk);
    const ComplexMatrix& m = rho.mat();
    const std::size_t n = rho.total_dim();
    for (std::size_t r = 0; r < nk; ++r)
        for (std::size_t c = 0; c < nk; ++c) {
            cplx sum = 0.0;
            for (std::size_t t : traced_offs)
                sum += m.data()[(keep_offs[r] + t) * n + keep_offs[c] + t];
            out(r, c) = sum;
        }

    std::vector<std::size_t> newdims;
    for (std::size_t p : kept) newdims.push_back(dims[p]);
    return DensityMatrix(std::move(newdims), HermitianOperator(std::move(out)));
}

HermitianOperator partial_transpose(const DensityMatrix& rho,
                                    const std::vector<std::size_t>& transposed) {
    const auto& dims = rho.dims();
    std::vector<std::size_t> tset = transposed;
    std::sort(tset.begin(), tset.end());
    if (tset.empty() || std::unique(tset.begin(), tset.end()) != tset.end() ||
        tset.back() >= dims.size() || tset.size() >= dims.size())
        throw ParameterRange("partial_transpose: cut is not a bipartition");

    const auto strides = strides_of(dims);
    const std::size_t n = rho.total_dim();

    // tpart[i]: portion of flat index i owned by the transposed parties
    std::vector<std::size_t> tpart(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t p : tset) tpart[i] += ((i / strides[p]) % dims[p]) * strides[p];

    const ComplexMatrix& m = rho.mat();
    ComplexMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t ik = i - tpart[i];
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t jk = j - tpart[j];
            out(i, j) = m.data()[(ik + tpart[j]) * n + jk + tpart[i]];
        }
    }
    return HermitianOperator(std::move(out));
}

std::vector<double> eigenvalues(const HermitianOperator& op) {
    const std::size_t n = op.dim();
    Eigen::MatrixXcd sym(n, n);
    const ComplexMatrix& m = op.mat();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            sym(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                0.5 * (m(i, j) + std::conj(m(j, i)));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym,
                                                           Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw Error("eigenvalues: eigensolver failed to converge");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = solver.eigenvalues()(static_cast<Eigen::Index>(i));
    return out;
}

double min_eigenvalue(const HermitianOperator& op) {
    return eigenvalues(op).front();
}

double purity(const DensityMatrix& rho) {
    // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    return kernels::active().sum_abs2(rho.mat().data(), rho.mat().size());
}

double trace_pair(const ComplexMatrix& a, const ComplexMatrix& b) {
    // Tr(ab) = sum_ij a_ij conj(b_ij) when both are Hermitian
    const cplx v = kernels::active().dotc(a.data(), b.data(), a.size());
    const double scale =
        std::max(1.0, a.frobenius_norm() * b.frobenius_norm());
    if (std::abs(v.imag()) > tols().equality * scale) {
        std::ostringstream msg;
        msg << "trace_pair: imaginary residue " << v.imag();
        throw Error(msg.str());
    }
    return v.real();
}

double hs_inner(const HermitianOperator& a, const HermitianOperator& b) {
    if (a.dim() != b.dim())
        throw DimensionMismatch("hs_inner: operator dimensions differ");
    return trace_pair(a.mat(), b.mat());
}

ComplexMatrix contract_last(const ComplexMatrix& x,
                            const std::vector<std::size_t>& dims,
                            const ComplexMatrix& op) {
    if (dims.empty()) throw DimensionMismatch("contract_last: empty dims");
    const std::size_t dl = dims.back();
    const std::size_t n = x.rows();
    if (x.cols() != n || product(dims) != n || op.rows() != dl || op.cols() != dl)
        throw DimensionMismatch("contract_last: shape mismatch");
    const std::size_t nrem = n / dl;

    const ComplexMatrix op_t = [&] {
        ComplexMatrix t(dl, dl);
        for (std::size_t k = 0; k < dl; ++k)
            for (std::size_t l = 0; l < dl; ++l) t(l, k) = op(k, l);
        return t;
    }();

    const auto& ops = kernels::active();
    ComplexMatrix out(nrem, nrem);
    for (std::size_t i = 0; i < nrem; ++i)
        for (std::size_t j = 0; j < nrem; ++j) {
            cplx sum = 0.0;
            for (std::size_t l = 0; l < dl; ++l)
                sum += ops.dotu(x.data() + (i * dl + l) * n + j * dl,
                                op_t.row(l), dl);
            out(i, j) = sum;
        }
    return out;
}

ComplexMatrix contract_first(const ComplexMatrix& x,
                             const std::vector<std::size_t>& dims,
                             const ComplexMatrix& op) {
    if (dims.empty()) throw DimensionMismatch("contract_first: empty dims");
    const std::size_t df = dims.front();
    const std::size_t n = x.rows();
    if (x.cols() != n || product(dims) != n || op.rows() != df ||
        op.cols() != df)
        throw DimensionMismatch("contract_first: shape mismatch");
    const std::size_t nrem = n / df;

    // R(K, L) = sum_{k,m} op(k, m) x((m, K), (k, L))
    ComplexMatrix out(nrem, nrem);
    for (std::size_t k = 0; k < df; ++k)
        for (std::size_t m = 0; m < df; ++m) {
            const cplx a = op(k, m);
            if (a == cplx(0.0)) continue;
            for (std::size_t row = 0; row < nrem; ++row)
                kernels::active().axpy(
                    a, x.data() + (m * nrem + row) * n + k * nrem,
                    out.data() + row * nrem, nrem);
        }
    return out;
}

}  // namespace qsep
