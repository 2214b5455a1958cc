#pragma once

#include <vector>

#include "katlind/complex_matrix.hpp"
#include "katlind/types.hpp"

namespace katlind {

// Result of a Hermitian eigendecomposition A = U diag(w) U^dagger with
// eigenvalues ascending and U unitary (columns are eigenvectors).
struct EigDecomposition {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;
};

// Cyclic Jacobi eigensolver for Hermitian matrices. Off-diagonal threshold
// 1e-14 * ||A||_F, at most 100 sweeps. Throws NotHermitian if the relative
// asymmetry exceeds 1e-12, NoConvergence if the sweep limit is reached.
EigDecomposition hermitian_eig(const ComplexMatrix& A);

// Eigenvalues only (ascending); skips eigenvector accumulation.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& A);

// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm(const ComplexMatrix& A);

// Decomposition A = pos - neg with pos, neg PSD and pos*neg = 0.
struct PosNegParts {
    ComplexMatrix pos;
    ComplexMatrix neg;
};
PosNegParts split_pos_neg(const ComplexMatrix& A);

// Principal square root of a PSD matrix. Eigenvalues in [-1e-10, 0) are
// clamped to zero; below -1e-10 throws NotPSD.
ComplexMatrix psd_sqrt(const ComplexMatrix& A);

// Solves A*rho + rho*A = X for Hermitian positive definite A, in A's
// eigenbasis. Throws NotPositiveDefinite when min eigenvalue <= 1e-12.
ComplexMatrix sylvester_solve(const ComplexMatrix& A, const ComplexMatrix& X);

// Reusable form: factorizes A once, then solves repeatedly. Used by the
// resolvent fixed-point iteration where A is fixed across thousands of
// solves.
class SylvesterSolver {
public:
    explicit SylvesterSolver(const ComplexMatrix& A);
    ComplexMatrix solve(const ComplexMatrix& X) const;
    const std::vector<double>& eigenvalues() const { return eig_.eigenvalues; }

private:
    EigDecomposition eig_;
    ComplexMatrix basis_adjoint_;
};

// One-sided Jacobi (Hestenes) SVD: B = U diag(sigma) V^dagger with sigma
// descending. Computes small singular values to absolute accuracy near
// machine precision (no Gram squaring), which the near-null-space thresholds
// in this project depend on. U columns for sigma == 0 are zero.
struct Svd {
    ComplexMatrix u;
    std::vector<double> sigma;
    ComplexMatrix v;
};
Svd hestenes_svd(const ComplexMatrix& B);

// Column-major LU with partial pivoting.
class LuFactor {
public:
    explicit LuFactor(ComplexMatrix A);
    std::vector<cplx> solve(std::vector<cplx> b) const;
    int dim() const { return lu_.dim(); }

private:
    ComplexMatrix lu_;
    std::vector<int> perm_;
};

// sin of the largest principal angle between span(V) and span(W); columns of
// both inputs must be orthonormal, cols(V) <= cols(W). V, W are given as
// lists of vectors.
double subspace_sin_angle(const std::vector<StateVector>& v, const std::vector<StateVector>& w);

}  // namespace katlind
