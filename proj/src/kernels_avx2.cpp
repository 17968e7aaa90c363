// AVX2+FMA variants of the complex kernels. Two complex doubles per
// 256-bit vector, interleaved (re0, im0, re1, im1). Compiled with
// -mavx2 -mfma; callers must gate on runtime CPU support.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "qsep/kernels.hpp"

namespace qsep::kernels {

namespace {

inline __m256d cmul(__m256d a, __m256d b) {
    // (ar*br - ai*bi, ar*bi + ai*br) per complex lane pair
    const __m256d a_re = _mm256_movedup_pd(a);
    const __m256d a_im = _mm256_permute_pd(a, 0xF);
    const __m256d b_swap = _mm256_permute_pd(b, 0x5);
    return _mm256_fmaddsub_pd(a_re, b, _mm256_mul_pd(a_im, b_swap));
}

cplx dotu_avx2(const cplx* a, const cplx* b, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(pa + 2 * i);
        const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        acc = _mm256_add_pd(acc, cmul(va, vb));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double re = lanes[0] + lanes[2];
    double im = lanes[1] + lanes[3];
    for (; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        re += ar * br - ai * bi;
        im += ar * bi + ai * br;
    }
    return {re, im};
}

cplx dotc_avx2(const cplx* a, const cplx* b, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(pa + 2 * i);
        const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        const __m256d a_re = _mm256_movedup_pd(va);
        const __m256d a_im = _mm256_permute_pd(va, 0xF);
        const __m256d b_swap = _mm256_permute_pd(vb, 0x5);
        // even lanes ar*br + ai*bi, odd lanes ar*bi - ai*br (negated imag)
        acc = _mm256_add_pd(
            acc, _mm256_fmsubadd_pd(a_re, vb, _mm256_mul_pd(a_im, b_swap)));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double re = lanes[0] + lanes[2];
    double im = -(lanes[1] + lanes[3]);
    for (; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        re += ar * br + ai * bi;
        im += ai * br - ar * bi;
    }
    return {re, im};
}

double sum_abs2_avx2(const cplx* a, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(pa + 2 * i);
        acc = _mm256_fmadd_pd(va, va, acc);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double s = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < n; ++i)
        s += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
    return s;
}

void axpy_avx2(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
    const double* px = reinterpret_cast<const double*>(x);
    double* py = reinterpret_cast<double*>(y);
    const __m256d al_re = _mm256_set1_pd(alpha.real());
    const __m256d al_im = _mm256_set1_pd(alpha.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d vx = _mm256_loadu_pd(px + 2 * i);
        const __m256d x_swap = _mm256_permute_pd(vx, 0x5);
        const __m256d prod =
            _mm256_fmaddsub_pd(al_re, vx, _mm256_mul_pd(al_im, x_swap));
        _mm256_storeu_pd(py + 2 * i,
                         _mm256_add_pd(_mm256_loadu_pd(py + 2 * i), prod));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale_avx2(cplx alpha, const cplx* x, cplx* out, std::size_t n) {
    const double* px = reinterpret_cast<const double*>(x);
    double* po = reinterpret_cast<double*>(out);
    const __m256d al_re = _mm256_set1_pd(alpha.real());
    const __m256d al_im = _mm256_set1_pd(alpha.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d vx = _mm256_loadu_pd(px + 2 * i);
        const __m256d x_swap = _mm256_permute_pd(vx, 0x5);
        _mm256_storeu_pd(
            po + 2 * i,
            _mm256_fmaddsub_pd(al_re, vx, _mm256_mul_pd(al_im, x_swap)));
    }
    for (; i < n; ++i) out[i] = alpha * x[i];
}

}  // namespace

const Ops& avx2_ops() {
    static const Ops ops{dotu_avx2, dotc_avx2, sum_abs2_avx2,
                         axpy_avx2, scale_avx2, "avx2"};
    return ops;
}

}  // namespace qsep::kernels

#endif  // x86_64
