#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

// Data-parallel inner loops shared by the whole library. Every entry point
// has a scalar reference implementation; on x86 an AVX2+FMA variant is
// compiled in and selected at runtime when the CPU supports it. The two
// are equivalence-tested against each other in tests/test_kernels.cpp.

namespace qsep::kernels {

using cplx = std::complex<double>;

struct Ops {
    // sum_i a[i] * b[i]
    cplx (*dotu)(const cplx* a, const cplx* b, std::size_t n);
    // sum_i a[i] * conj(b[i])
    cplx (*dotc)(const cplx* a, const cplx* b, std::size_t n);
    // sum_i |a[i]|^2
    double (*sum_abs2)(const cplx* a, std::size_t n);
    // y[i] += alpha * x[i]
    void (*axpy)(cplx alpha, const cplx* x, cplx* y, std::size_t n);
    // out[i] = alpha * x[i]
    void (*scale)(cplx alpha, const cplx* x, cplx* out, std::size_t n);
    const char* name;
};

const Ops& scalar_ops();

#if defined(__x86_64__) || defined(_M_X64)
bool avx2_compiled_in();
const Ops& avx2_ops();  // only callable when avx2_compiled_in()
#endif

/// The runtime-selected implementation. Honors QSEP_KERNELS=scalar|avx2
/// (set before first use), otherwise picks AVX2 when the CPU has it.
const Ops& active();

/// Names of all implementations usable on this machine.
std::vector<std::string> available();

}  // namespace qsep::kernels
