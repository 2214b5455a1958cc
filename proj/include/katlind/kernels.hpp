#pragma once

#include <string>
#include <string_view>

#include "katlind/types.hpp"

// Low-level dense complex kernels. Scalar reference implementations plus an
// AVX2+FMA variant selected at runtime (cpuid, overridable via the
// KATLIND_SIMD environment variable or set_active_backend). All variants are
// equivalence-tested against the scalar reference.
//
// Matrices are column-major; ld* are leading dimensions in elements.

namespace katlind::kernels {

struct KernelOps {
    const char* name;

    // C(:,0:n) = (accumulate ? C : 0) + A(m x kk) * B(kk x n)
    void (*zgemm)(int m, int n, int kk, const cplx* A, int lda, const cplx* B,
                  int ldb, cplx* C, int ldc, bool accumulate);

    // y += a * x
    void (*zaxpy)(int n, cplx a, const cplx* x, cplx* y);

    // x *= a
    void (*zscal)(int n, cplx a, cplx* x);

    // sum conj(x[i]) * y[i]
    cplx (*zdotc)(int n, const cplx* x, const cplx* y);

    // sum |x[i]|^2
    double (*znorm2sq)(int n, const cplx* x);

    // plane rotation with real cosine:
    //   x' =  c*x + s*y
    //   y' = -conj(s)*x + c*y
    void (*zrot)(int n, cplx* x, cplx* y, double c, cplx s);
};

const KernelOps& scalar_ops();

bool avx2_supported();
// Returns the AVX2 table; only valid to *call through* when avx2_supported().
const KernelOps& avx2_ops();

// The table selected at process start (best supported backend, or the one
// named in KATLIND_SIMD). Stable for the life of the process unless
// set_active_backend is called.
const KernelOps& active_ops();

// Force a backend by name ("scalar", "avx2"). Throws ConfigError if the
// backend is unknown or unsupported on this machine. Intended for tests and
// benchmarking.
void set_active_backend(std::string_view name);

std::string active_backend_name();

}  // namespace katlind::kernels
