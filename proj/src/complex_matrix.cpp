#include "katlind/complex_matrix.hpp"
#include <algorithm>

#include <cmath>
#include <cstring>

#include "katlind/kernels.hpp"

namespace katlind {

ComplexMatrix ComplexMatrix::identity(int dim) {
    ComplexMatrix m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    kernels::active_ops().zaxpy(static_cast<int>(data_.size()), cplx(1.0, 0.0), o.data_.data(),
                                data_.data());
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
    kernels::active_ops().zaxpy(static_cast<int>(data_.size()), cplx(-1.0, 0.0), o.data_.data(),
                                data_.data());
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx a) {
    kernels::active_ops().zscal(static_cast<int>(data_.size()), a, data_.data());
    return *this;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& o) const {
    ComplexMatrix c(dim_);
    matmul_into(c, *this, o, false);
    return c;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix r(dim_);
    for (int j = 0; j < dim_; ++j)
        for (int i = 0; i < dim_; ++i) r(j, i) = std::conj((*this)(i, j));
    return r;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix r(dim_);
    for (int j = 0; j < dim_; ++j)
        for (int i = 0; i < dim_; ++i) r(j, i) = (*this)(i, j);
    return r;
}

ComplexMatrix ComplexMatrix::conj() const {
    ComplexMatrix r(dim_);
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = std::conj(data_[i]);
    return r;
}

cplx ComplexMatrix::trace() const {
    cplx t = 0.0;
    for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    return std::sqrt(kernels::active_ops().znorm2sq(static_cast<int>(data_.size()), data_.data()));
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const cplx& z : data_) m = std::max(m, std::abs(z));
    return m;
}

bool ComplexMatrix::all_finite() const {
    for (const cplx& z : data_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

double ComplexMatrix::asymmetry() const {
    double s = 0.0;
    for (int j = 0; j < dim_; ++j)
        for (int i = 0; i < dim_; ++i) s += std::norm((*this)(i, j) - std::conj((*this)(j, i)));
    return std::sqrt(s);
}

void ComplexMatrix::hermitize() {
    for (int j = 0; j < dim_; ++j) {
        (*this)(j, j) = cplx((*this)(j, j).real(), 0.0);
        for (int i = j + 1; i < dim_; ++i) {
            const cplx avg = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
            (*this)(i, j) = avg;
            (*this)(j, i) = std::conj(avg);
        }
    }
}

void ComplexMatrix::set_zero() { std::fill(data_.begin(), data_.end(), cplx(0.0, 0.0)); }

void matmul_into(ComplexMatrix& C, const ComplexMatrix& A, const ComplexMatrix& B,
                 bool accumulate) {
    const int n = A.dim();
    if (C.dim() != n) C = ComplexMatrix(n);
    kernels::active_ops().zgemm(n, n, n, A.data(), n, B.data(), n, C.data(), n, accumulate);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const int na = a.dim(), nb = b.dim();
    ComplexMatrix r(na * nb);
    for (int ja = 0; ja < na; ++ja)
        for (int ia = 0; ia < na; ++ia) {
            const cplx w = a(ia, ja);
            if (w == cplx(0.0, 0.0)) continue;
            for (int jb = 0; jb < nb; ++jb)
                for (int ib = 0; ib < nb; ++ib)
                    r(ia * nb + ib, ja * nb + jb) = w * b(ib, jb);
        }
    return r;
}

double vec_norm(const StateVector& v) {
    return std::sqrt(kernels::active_ops().znorm2sq(static_cast<int>(v.size()), v.data()));
}

cplx vec_dot(const StateVector& x, const StateVector& y) {
    return kernels::active_ops().zdotc(static_cast<int>(x.size()), x.data(), y.data());
}

void vec_normalize(StateVector& v) {
    const double n = vec_norm(v);
    if (n > 0.0)
        kernels::active_ops().zscal(static_cast<int>(v.size()), cplx(1.0 / n, 0.0), v.data());
}

StateVector matvec(const ComplexMatrix& A, const StateVector& x) {
    const int n = A.dim();
    StateVector y(n, cplx(0.0, 0.0));
    kernels::active_ops().zgemm(n, 1, n, A.data(), n, x.data(), n, y.data(), n, false);
    return y;
}

ComplexMatrix outer(const StateVector& x, const StateVector& y) {
    const int n = static_cast<int>(x.size());
    ComplexMatrix r(n);
    for (int j = 0; j < n; ++j) {
        const cplx yj = std::conj(y[j]);
        for (int i = 0; i < n; ++i) r(i, j) = x[i] * yj;
    }
    return r;
}

std::vector<cplx> vectorize(const ComplexMatrix& A) {
    // Column-major storage means column stacking is the identity on memory.
    return std::vector<cplx>(A.data(), A.data() + static_cast<std::size_t>(A.dim()) * A.dim());
}

ComplexMatrix unvectorize(const std::vector<cplx>& v, int dim) {
    ComplexMatrix r(dim);
    std::memcpy(r.data(), v.data(), v.size() * sizeof(cplx));
    return r;
}

}  // namespace katlind
