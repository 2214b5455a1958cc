#include "katlind/kernels.hpp"

// AVX2+FMA kernels for interleaved complex doubles. One ymm register holds
// two complex values; fmaddsub gives the re/im sign split of a complex
// multiply for free. This file is compiled with -mavx2 -mfma and only ever
// called through the dispatch table after a cpuid check.

#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
#define KATLIND_X86 1
#else
#define KATLIND_X86 0
#endif

#if KATLIND_X86

#include <immintrin.h>

namespace katlind::kernels {
namespace {

// (re0, im0, re1, im1) -> (im0, re0, im1, re1)
inline __m256d swap_halves(__m256d v) { return _mm256_permute_pd(v, 0b0101); }

// Complex multiply of two packed pairs: a * b.
inline __m256d cmul(__m256d a, __m256d b) {
    __m256d ar = _mm256_movedup_pd(a);                  // (ar0, ar0, ar1, ar1)
    __m256d ai = _mm256_permute_pd(a, 0b1111);          // (ai0, ai0, ai1, ai1)
    __m256d t = _mm256_mul_pd(ai, swap_halves(b));      // (ai*bi, ai*br, ...)
    return _mm256_fmaddsub_pd(ar, b, t);                // (ar*br-ai*bi, ar*bi+ai*br)
}

// y[0:2) += s * x[0:2) with s pre-split into (sr,sr,sr,sr), (si,si,si,si).
inline __m256d fma_cplx(__m256d acc, __m256d x, __m256d sr, __m256d si) {
    __m256d t = _mm256_fmaddsub_pd(sr, x, _mm256_mul_pd(si, swap_halves(x)));
    return _mm256_add_pd(acc, t);
}

void zgemm_avx2(int m, int n, int kk, const cplx* A, int lda, const cplx* B,
                int ldb, cplx* C, int ldc, bool accumulate) {
    const int m2 = m - (m & 1);
    for (int j = 0; j < n; ++j) {
        cplx* Cj = C + static_cast<std::size_t>(j) * ldc;
        if (!accumulate) {
            for (int i = 0; i < m; ++i) Cj[i] = cplx(0.0, 0.0);
        }
        for (int l = 0; l < kk; ++l) {
            const cplx b = B[l + static_cast<std::size_t>(j) * ldb];
            if (b.real() == 0.0 && b.imag() == 0.0) continue;
            const cplx* Al = A + static_cast<std::size_t>(l) * lda;
            const __m256d br = _mm256_set1_pd(b.real());
            const __m256d bi = _mm256_set1_pd(b.imag());
            int i = 0;
            for (; i < m2; i += 2) {
                __m256d va = _mm256_loadu_pd(reinterpret_cast<const double*>(Al + i));
                __m256d vc = _mm256_loadu_pd(reinterpret_cast<double*>(Cj + i));
                vc = fma_cplx(vc, va, br, bi);
                _mm256_storeu_pd(reinterpret_cast<double*>(Cj + i), vc);
            }
            if (i < m) Cj[i] += Al[i] * b;
        }
    }
}

void zaxpy_avx2(int n, cplx a, const cplx* x, cplx* y) {
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    const int n2 = n - (n & 1);
    int i = 0;
    for (; i < n2; i += 2) {
        __m256d vx = _mm256_loadu_pd(reinterpret_cast<const double*>(x + i));
        __m256d vy = _mm256_loadu_pd(reinterpret_cast<double*>(y + i));
        vy = fma_cplx(vy, vx, ar, ai);
        _mm256_storeu_pd(reinterpret_cast<double*>(y + i), vy);
    }
    if (i < n) y[i] += a * x[i];
}

void zscal_avx2(int n, cplx a, cplx* x) {
    const __m256d va = _mm256_setr_pd(a.real(), a.imag(), a.real(), a.imag());
    const int n2 = n - (n & 1);
    int i = 0;
    for (; i < n2; i += 2) {
        __m256d vx = _mm256_loadu_pd(reinterpret_cast<const double*>(x + i));
        _mm256_storeu_pd(reinterpret_cast<double*>(x + i), cmul(vx, va));
    }
    if (i < n) x[i] *= a;
}

cplx zdotc_avx2(int n, const cplx* x, const cplx* y) {
    // conj(x)*y: re = xr*yr + xi*yi, im = xr*yi - xi*yr
    __m256d acc_d = _mm256_setzero_pd();  // element products xr*yr, xi*yi
    __m256d acc_c = _mm256_setzero_pd();  // cross products  xi*yr, xr*yi
    const int n2 = n - (n & 1);
    int i = 0;
    for (; i < n2; i += 2) {
        __m256d vx = _mm256_loadu_pd(reinterpret_cast<const double*>(x + i));
        __m256d vy = _mm256_loadu_pd(reinterpret_cast<const double*>(y + i));
        acc_d = _mm256_fmadd_pd(vx, vy, acc_d);
        acc_c = _mm256_fmadd_pd(swap_halves(vx), vy, acc_c);
    }
    alignas(32) double d[4], c[4];
    _mm256_store_pd(d, acc_d);
    _mm256_store_pd(c, acc_c);
    double re = d[0] + d[1] + d[2] + d[3];
    double im = (c[1] - c[0]) + (c[3] - c[2]);
    for (; i < n; ++i) {
        const cplx p = std::conj(x[i]) * y[i];
        re += p.real();
        im += p.imag();
    }
    return {re, im};
}

double znorm2sq_avx2(int n, const cplx* x) {
    __m256d acc = _mm256_setzero_pd();
    const int n2 = n - (n & 1);
    int i = 0;
    for (; i < n2; i += 2) {
        __m256d vx = _mm256_loadu_pd(reinterpret_cast<const double*>(x + i));
        acc = _mm256_fmadd_pd(vx, vx, acc);
    }
    alignas(32) double d[4];
    _mm256_store_pd(d, acc);
    double s = d[0] + d[1] + d[2] + d[3];
    for (; i < n; ++i) s += std::norm(x[i]);
    return s;
}

void zrot_avx2(int n, cplx* x, cplx* y, double c, cplx s) {
    const __m256d vc = _mm256_set1_pd(c);
    const __m256d sr = _mm256_set1_pd(s.real());
    const __m256d si = _mm256_set1_pd(s.imag());
    const __m256d nsi = _mm256_set1_pd(-s.imag());  // conj(s) imag part
    const int n2 = n - (n & 1);
    int i = 0;
    for (; i < n2; i += 2) {
        __m256d vx = _mm256_loadu_pd(reinterpret_cast<double*>(x + i));
        __m256d vy = _mm256_loadu_pd(reinterpret_cast<double*>(y + i));
        // s*y and conj(s)*x
        __m256d sy = _mm256_fmaddsub_pd(sr, vy, _mm256_mul_pd(si, swap_halves(vy)));
        __m256d csx = _mm256_fmaddsub_pd(sr, vx, _mm256_mul_pd(nsi, swap_halves(vx)));
        __m256d nx = _mm256_fmadd_pd(vc, vx, sy);    //  c*x + s*y
        __m256d ny = _mm256_fmsub_pd(vc, vy, csx);   //  c*y - conj(s)*x
        _mm256_storeu_pd(reinterpret_cast<double*>(x + i), nx);
        _mm256_storeu_pd(reinterpret_cast<double*>(y + i), ny);
    }
    const cplx sc = std::conj(s);
    for (; i < n; ++i) {
        const cplx xi = x[i];
        const cplx yi = y[i];
        x[i] = c * xi + s * yi;
        y[i] = c * yi - sc * xi;
    }
}

}  // namespace

bool avx2_supported() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

const KernelOps& avx2_ops() {
    static const KernelOps ops{"avx2",      zgemm_avx2, zaxpy_avx2,
                               zscal_avx2,  zdotc_avx2, znorm2sq_avx2,
                               zrot_avx2};
    return ops;
}

}  // namespace katlind::kernels

#else  // non-x86: no AVX2 backend

namespace katlind::kernels {

bool avx2_supported() { return false; }

const KernelOps& avx2_ops() { return scalar_ops(); }

}  // namespace katlind::kernels

#endif
