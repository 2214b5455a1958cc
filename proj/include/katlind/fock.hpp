#pragma once

#include <vector>

#include "katlind/complex_matrix.hpp"
#include "katlind/types.hpp"

namespace katlind {

// Simulation universe: truncated Fock space |0>..|dim-1>, photon order k,
// drive amplitude alpha (real, >= 0).
struct FockConfig {
    int dim = 0;
    int k = 1;
    double alpha = 0.0;

    // Smallest truncation the guard-band heuristic accepts.
    static int guard_dim(int k, double alpha);
    // Default truncation: guard rounded up to a multiple of k, plus 20.
    static int default_dim(int k, double alpha);

    bool meets_guard() const { return dim >= guard_dim(k, alpha); }
    void validate() const;  // throws ConfigError on k < 1, dim < 1, alpha < 0
};

// Ladder operators. a|n> = sqrt(n)|n-1>.
ComplexMatrix annihilation(const FockConfig& cfg);
ComplexMatrix creation(const FockConfig& cfg);
ComplexMatrix number_op(const FockConfig& cfg);

// Dissipation operator a^k - alpha^k I.
ComplexMatrix jump_op(const FockConfig& cfg);

// Closed-form diagonal of the commutator [jump, jump^dagger]:
// (N+1)...(N+k) - N(N-1)^+...(N-(k-1))^+.
ComplexMatrix commutator_diag(const FockConfig& cfg);

// Weight operator sqrt(I + jump^dagger jump); Hermitian positive definite.
ComplexMatrix weight_op(const FockConfig& cfg);

// Coherent state with complex amplitude beta, renormalized after truncation.
// Throws TailTooHeavy when |beta|^2 + 10|beta| > dim.
StateVector coherent_state(const FockConfig& cfg, cplx beta);

// Normalized superposition of the k coherent states alpha*e^{2 pi i m/k}
// with phases e^{2 pi i ell m / k}; Fock support on a single residue class
// n mod k. Requires alpha > 0 and the coherent tail guard.
StateVector cat_state(const FockConfig& cfg, int ell);

// Orthonormal basis of the kernel of the jump operator, built from the
// ladder recurrence psi_{m+k} = alpha^k psi_m / sqrt((m+k)...(m+1)) seeded on
// each residue class, then orthonormalized. Requires alpha > 0.
std::vector<StateVector> kernel_basis(const FockConfig& cfg);

}  // namespace katlind
