#pragma once

#include <string>
#include <vector>

#include "katlind/lindblad.hpp"

namespace katlind {

// Diagonal conserved observable with its trigonometric label.
struct LabeledInvariant {
    std::string label;  // "cos_0", "cos_1", ..., "sin_1", ...
    int m = 0;
    bool is_sin = false;
    ComplexMatrix op;
};

// The k explicit diagonal invariants: cos(2 pi m n / k) for
// m = 0..ceil((k-1)/2) and sin(2 pi m n / k) for m = 1..floor((k-1)/2).
std::vector<LabeledInvariant> explicit_invariants(const FockConfig& cfg);

// k^2 conserved observables paired with a basis of steady states.
struct InvariantSet {
    std::vector<ComplexMatrix> observables;   // Hermitian, real-orthonormal
    std::vector<ComplexMatrix> steady_basis;  // Hermitian, kernel-span support
    std::vector<double> pairing;              // k^2 x k^2 row-major, tr(Q_i sigma_j)
    double pairing_condition = 0.0;
    double sigma_max = 0.0;        // largest singular value of the generator
    double null_gap_ratio = 0.0;   // (k^2+1)-th / k^2-th smallest singular value
    std::vector<double> smallest_sigmas;     // a few smallest, for diagnostics
    double max_observable_residual = 0.0;    // ||adjoint gen(Q)||_F / ||Q||_F
    double max_steady_residual = 0.0;        // ||gen(sigma)||_F relative to sigma_max
};

// Near-null spaces of the generator and its adjoint, found per residue-class
// block of the superoperator (the generator preserves (i - j) mod k exactly).
// Throws RankMismatch when the null dimension at threshold 1e-8*sigma_max is
// not k^2 or the singular-value gap ratio is below 1e3; DimensionTooLarge on
// the dim^2 memory guard.
InvariantSet numeric_invariants(const LindbladModel& model);

// Limit-state prediction: rho_bar = sum_i tr(Q_i rho0) * dual steady basis.
// Hermitian by construction, supported on the kernel span; trace and the
// eigenvalue floor are reported, not enforced. Throws IllConditionedPairing
// when the pairing condition number exceeds 1e8.
DensityMatrix predict_limit(const LindbladModel& model, const InvariantSet& inv,
                            const DensityMatrix& rho0);

// Measured eigenvalue of each explicit invariant on each cat state.
struct CatEigenRow {
    std::string label;
    int m = 0;
    int ell = 0;
    bool is_sin = false;
    double measured = 0.0;            // Rayleigh quotient
    double expected_magnitude = 0.0;  // |cos| or |sin| of 2 pi m ell / k
    double residual = 0.0;            // ||Q v - measured v||
};
std::vector<CatEigenRow> cat_eigen_report(const FockConfig& cfg);

}  // namespace katlind
