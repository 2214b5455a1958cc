#pragma once

#include <vector>

#include "katlind/complex_matrix.hpp"
#include "katlind/fock.hpp"
#include "katlind/numerics.hpp"
#include "katlind/types.hpp"

namespace katlind {

// Quantum state: Hermitian, PSD up to -1e-8, unit trace.
class DensityMatrix {
public:
    DensityMatrix() = default;

    // Validates Hermiticity (1e-11 relative), positivity (min eig >= -1e-8)
    // and trace (|tr - 1| <= 1e-9); throws otherwise.
    static DensityMatrix validated(ComplexMatrix m);
    // Skips validation; for integrator internals where the invariants are
    // maintained by construction.
    static DensityMatrix trusted(ComplexMatrix m);

    static DensityMatrix pure(const StateVector& psi);
    static DensityMatrix fock_state(int dim, int n);
    // Equal mixture rho = sum_i w_i |psi_i><psi_i| for normalized psi_i.
    static DensityMatrix mixture(const std::vector<StateVector>& states,
                                 const std::vector<double>& weights);

    const ComplexMatrix& mat() const { return mat_; }
    ComplexMatrix& mat() { return mat_; }
    int dim() const { return mat_.dim(); }

private:
    explicit DensityMatrix(ComplexMatrix m) : mat_(std::move(m)) {}
    ComplexMatrix mat_;
};

// Half the trace norm of the difference.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

// Cached operators and generator actions for one FockConfig. All methods are
// const and the object is safe to share across threads.
class LindbladModel {
public:
    explicit LindbladModel(const FockConfig& cfg);

    const FockConfig& config() const { return cfg_; }
    const ComplexMatrix& jump() const { return jump_; }
    const ComplexMatrix& jump_adjoint() const { return jump_adj_; }
    const ComplexMatrix& jump_gram() const { return gram_; }      // L^dagger L
    const ComplexMatrix& weight() const { return weight_; }       // sqrt(I + L^dagger L)
    const ComplexMatrix& commutator() const { return comm_; }     // diagonal [L, L^dagger]

    // Spectral-norm estimate of L^dagger L (power iteration); controls the
    // explicit stability limit.
    double gram_norm_estimate() const { return gram_norm_; }

    // Generator L rho L^dagger - (L^dagger L rho + rho L^dagger L)/2 for
    // Hermitian rho (3 products). Throws NotHermitian.
    ComplexMatrix apply_generator(const ComplexMatrix& rho) const;
    // Same map without the Hermitian shortcut or check; used to build
    // superoperator columns from non-Hermitian basis matrices.
    ComplexMatrix apply_generator_any(const ComplexMatrix& rho) const;
    // Negative generator (the resolvent/backward-Euler operator).
    ComplexMatrix apply_neg_generator(const ComplexMatrix& rho) const;
    // Heisenberg dual: L^dagger Q L - (L^dagger L Q + Q L^dagger L)/2.
    ComplexMatrix apply_adjoint_generator(const ComplexMatrix& q) const;

    // In-place generator action for the integrator hot loop: out = L rho
    // L^dagger - (W rho + (W rho)^dagger)/2 using caller scratch; rho must be
    // Hermitian.
    void generator_into(const ComplexMatrix& rho, ComplexMatrix& out, ComplexMatrix& scratch) const;

    // dim^2 x dim^2 matrix acting on column-stacked matrices. Guarded by
    // dim^2 <= 40000 (DimensionTooLarge).
    ComplexMatrix generator_matrix() const;
    ComplexMatrix adjoint_generator_matrix() const;

    // Nuclear norm tr|S rho S| that the contraction statements use.
    double weighted_trace_norm(const ComplexMatrix& rho) const;
    // tr(L rho L^dagger); equals weighted_trace_norm(rho) - 1 on states.
    double lyapunov(const DensityMatrix& rho) const;
    double lyapunov_raw(const ComplexMatrix& rho) const;

private:
    FockConfig cfg_;
    ComplexMatrix jump_, jump_adj_, gram_, weight_, comm_;
    double gram_norm_ = 0.0;
};

}  // namespace katlind
