#pragma once

#include <vector>

#include "katlind/types.hpp"

namespace katlind {

// Dense square complex matrix, column-major. Carrier for operators, density
// matrices and (at size dim^2) superoperators.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(int dim) : dim_(dim), data_(static_cast<std::size_t>(dim) * dim) {}

    static ComplexMatrix identity(int dim);

    int dim() const { return dim_; }
    bool empty() const { return dim_ == 0; }

    cplx& operator()(int i, int j) { return data_[i + static_cast<std::size_t>(j) * dim_]; }
    const cplx& operator()(int i, int j) const {
        return data_[i + static_cast<std::size_t>(j) * dim_];
    }

    cplx* data() { return data_.data(); }
    const cplx* data() const { return data_.data(); }
    cplx* col(int j) { return data_.data() + static_cast<std::size_t>(j) * dim_; }
    const cplx* col(int j) const { return data_.data() + static_cast<std::size_t>(j) * dim_; }

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(cplx a);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

    // Dense product this * o.
    ComplexMatrix operator*(const ComplexMatrix& o) const;

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conj() const;

    cplx trace() const;
    double frobenius_norm() const;
    double max_abs() const;
    bool all_finite() const;

    // ||A - A^dagger||_F
    double asymmetry() const;
    // A <- (A + A^dagger)/2
    void hermitize();

    void set_zero();

private:
    int dim_ = 0;
    std::vector<cplx> data_;
};

// C = A*B, or C += A*B when accumulate. C must not alias A or B.
void matmul_into(ComplexMatrix& C, const ComplexMatrix& A, const ComplexMatrix& B,
                 bool accumulate = false);

// Kronecker product (a ⊗ b), size dim(a)*dim(b).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// State vectors in the Fock basis.
using StateVector = std::vector<cplx>;

double vec_norm(const StateVector& v);
cplx vec_dot(const StateVector& x, const StateVector& y);  // <x|y>, conjugates x
void vec_normalize(StateVector& v);
StateVector matvec(const ComplexMatrix& A, const StateVector& x);
ComplexMatrix outer(const StateVector& x, const StateVector& y);  // |x><y|

// Column-stacking bridge between matrices and superoperator vectors.
std::vector<cplx> vectorize(const ComplexMatrix& A);
ComplexMatrix unvectorize(const std::vector<cplx>& v, int dim);

}  // namespace katlind
