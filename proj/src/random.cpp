#include "katlind/random.hpp"

#include <cmath>

namespace katlind {

std::uint64_t Rng::next_u64() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

cplx Rng::gaussian_cplx() {
    const double re = gaussian();
    const double im = gaussian();
    return {re, im};
}

ComplexMatrix random_hermitian(int dim, Rng& rng) {
    ComplexMatrix m(dim);
    for (int j = 0; j < dim; ++j) {
        m(j, j) = rng.gaussian();
        for (int i = j + 1; i < dim; ++i) {
            const cplx z = 0.5 * rng.gaussian_cplx();
            m(i, j) = z;
            m(j, i) = std::conj(z);
        }
    }
    return m;
}

ComplexMatrix random_psd_unit_trace(int dim, Rng& rng) {
    ComplexMatrix g(dim);
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i < dim; ++i) g(i, j) = rng.gaussian_cplx();
    ComplexMatrix p = g * g.adjoint();
    p.hermitize();
    const double tr = p.trace().real();
    p *= cplx(1.0 / tr, 0.0);
    return p;
}

DensityMatrix random_density(int dim, int support, Rng& rng) {
    const int b = std::min(support, dim);
    ComplexMatrix g(b);
    for (int j = 0; j < b; ++j)
        for (int i = 0; i < b; ++i) g(i, j) = rng.gaussian_cplx();
    ComplexMatrix p = g * g.adjoint();
    p.hermitize();
    const double tr = p.trace().real();
    ComplexMatrix full(dim);
    for (int j = 0; j < b; ++j)
        for (int i = 0; i < b; ++i) full(i, j) = p(i, j) / tr;
    return DensityMatrix::trusted(std::move(full));
}

StateVector random_state(int dim, int support, Rng& rng) {
    StateVector v(dim, cplx(0.0, 0.0));
    const int b = std::min(support, dim);
    for (int i = 0; i < b; ++i) v[i] = rng.gaussian_cplx();
    vec_normalize(v);
    return v;
}

}  // namespace katlind
