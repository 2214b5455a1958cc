#pragma once

// Shared helpers for the test binaries.

#include <cmath>

#include "katlind/complex_matrix.hpp"
#include "katlind/random.hpp"

namespace katlind::testutil {

inline double rel_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix d = a;
    d -= b;
    const double scale = std::max(a.frobenius_norm(), b.frobenius_norm());
    return scale > 0.0 ? d.frobenius_norm() / scale : d.frobenius_norm();
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    double m = 0.0;
    for (int j = 0; j < a.dim(); ++j)
        for (int i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

}  // namespace katlind::testutil
