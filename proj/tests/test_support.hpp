#pragma once

// Shared helpers for the unit and acceptance suites. Everything here is
// deliberately naive (plain loops, no kernel layer) so it can serve as an
// independent cross-check of the library paths it exercises.

#include <complex>
#include <numeric>
#include <random>
#include <vector>

#include "qsep/linalg.hpp"

namespace qsep::test {

inline std::mt19937_64 make_rng(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

inline double uniform01(std::mt19937_64& rng) {
    return (rng() >> 11) * 0x1.0p-53;
}

inline cplx gaussian_pair(std::mt19937_64& rng) {
    // Box-Muller on explicit uniforms: fully determined by the engine
    const double u1 = std::max(uniform01(rng), 1e-300);
    const double u2 = uniform01(rng);
    const double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
}

inline std::vector<cplx> random_unit_vector(std::size_t n, std::mt19937_64& rng) {
    std::vector<cplx> v(n);
    double norm2 = 0.0;
    for (auto& z : v) {
        z = gaussian_pair(rng);
        norm2 += std::norm(z);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& z : v) z *= inv;
    return v;
}

inline ComplexMatrix outer(const std::vector<cplx>& v) {
    ComplexMatrix m(v.size(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j)
            m(i, j) = v[i] * std::conj(v[j]);
    return m;
}

inline ComplexMatrix random_matrix(std::size_t rows, std::size_t cols,
                                   std::mt19937_64& rng) {
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = gaussian_pair(rng);
    return m;
}

inline ComplexMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
    ComplexMatrix g = random_matrix(n, n, rng);
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = 0.5 * (g(i, j) + std::conj(g(j, i)));
    return m;
}

/// Ginibre-ensemble mixed state on the given subsystem dimensions.
inline DensityMatrix random_density(const std::vector<std::size_t>& dims,
                                    std::mt19937_64& rng) {
    std::size_t n = std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                                    std::multiplies<>());
    ComplexMatrix g = random_matrix(n, n, rng);
    ComplexMatrix rho(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            cplx sum = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                sum += g(i, k) * std::conj(g(j, k));
            rho(i, j) = sum;
        }
    const double tr = rho.trace().real();
    rho *= cplx(1.0 / tr, 0.0);
    return DensityMatrix(dims, HermitianOperator(std::move(rho)));
}

/// |Phi+><Phi+| on C^d (x) C^d.
inline DensityMatrix bell_state(std::size_t d) {
    ComplexMatrix m(d * d, d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            m(i * d + i, j * d + j) = 1.0 / static_cast<double>(d);
    return DensityMatrix({d, d}, HermitianOperator(std::move(m)));
}

/// p |Phi+><Phi+| + (1-p) I/d^2.
inline DensityMatrix isotropic_state(std::size_t d, double p) {
    ComplexMatrix m(d * d, d * d);
    for (std::size_t i = 0; i < d * d; ++i)
        m(i, i) = (1.0 - p) / static_cast<double>(d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            m(i * d + i, j * d + j) += p / static_cast<double>(d);
    return DensityMatrix({d, d}, HermitianOperator(std::move(m)));
}

}  // namespace qsep::test
