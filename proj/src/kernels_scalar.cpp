#include "katlind/kernels.hpp"

// Scalar reference kernels. These define the semantics; SIMD variants must
// match them to rounding error.

namespace katlind::kernels {
namespace {

void zgemm_scalar(int m, int n, int kk, const cplx* A, int lda, const cplx* B,
                  int ldb, cplx* C, int ldc, bool accumulate) {
    for (int j = 0; j < n; ++j) {
        cplx* Cj = C + static_cast<std::size_t>(j) * ldc;
        if (!accumulate) {
            for (int i = 0; i < m; ++i) Cj[i] = cplx(0.0, 0.0);
        }
        for (int l = 0; l < kk; ++l) {
            const cplx b = B[l + static_cast<std::size_t>(j) * ldb];
            if (b.real() == 0.0 && b.imag() == 0.0) continue;
            const cplx* Al = A + static_cast<std::size_t>(l) * lda;
            for (int i = 0; i < m; ++i) Cj[i] += Al[i] * b;
        }
    }
}

void zaxpy_scalar(int n, cplx a, const cplx* x, cplx* y) {
    for (int i = 0; i < n; ++i) y[i] += a * x[i];
}

void zscal_scalar(int n, cplx a, cplx* x) {
    for (int i = 0; i < n; ++i) x[i] *= a;
}

cplx zdotc_scalar(int n, const cplx* x, const cplx* y) {
    double re = 0.0, im = 0.0;
    for (int i = 0; i < n; ++i) {
        const cplx p = std::conj(x[i]) * y[i];
        re += p.real();
        im += p.imag();
    }
    return {re, im};
}

double znorm2sq_scalar(int n, const cplx* x) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::norm(x[i]);
    return s;
}

void zrot_scalar(int n, cplx* x, cplx* y, double c, cplx s) {
    const cplx sc = std::conj(s);
    for (int i = 0; i < n; ++i) {
        const cplx xi = x[i];
        const cplx yi = y[i];
        x[i] = c * xi + s * yi;
        y[i] = c * yi - sc * xi;
    }
}

}  // namespace

const KernelOps& scalar_ops() {
    static const KernelOps ops{"scalar",       zgemm_scalar, zaxpy_scalar,
                               zscal_scalar,   zdotc_scalar, znorm2sq_scalar,
                               zrot_scalar};
    return ops;
}

}  // namespace katlind::kernels
