#pragma once

#include <cstdint>

#include "katlind/complex_matrix.hpp"
#include "katlind/lindblad.hpp"

namespace katlind {

// Deterministic generator (splitmix64 + Box-Muller) so seeded runs are
// reproducible across platforms and standard library versions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    double uniform();   // [0, 1)
    double gaussian();  // standard normal
    cplx gaussian_cplx();

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Random Hermitian matrix with unit-scale Gaussian entries.
ComplexMatrix random_hermitian(int dim, Rng& rng);

// Random PSD matrix G G^dagger, trace normalized to 1.
ComplexMatrix random_psd_unit_trace(int dim, Rng& rng);

// Random density matrix supported on the first `support` Fock levels.
DensityMatrix random_density(int dim, int support, Rng& rng);

// Random normalized state supported on the first `support` levels.
StateVector random_state(int dim, int support, Rng& rng);

}  // namespace katlind
