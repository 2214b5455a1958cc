#include "katlind/fock.hpp"

#include <cmath>

#include "katlind/kernels.hpp"
#include "katlind/numerics.hpp"

namespace katlind {

int FockConfig::guard_dim(int k, double alpha) {
    return static_cast<int>(std::ceil(alpha * alpha + 10.0 * alpha + 4.0 * k));
}

int FockConfig::default_dim(int k, double alpha) {
    int d = guard_dim(k, alpha);
    if (d % k != 0) d += k - (d % k);
    return d + 20;
}

void FockConfig::validate() const {
    if (k < 1) throw ConfigError("FockConfig: k must be >= 1");
    if (dim < 1) throw ConfigError("FockConfig: dim must be >= 1");
    if (!(alpha >= 0.0)) throw ConfigError("FockConfig: alpha must be real >= 0");
}

ComplexMatrix annihilation(const FockConfig& cfg) {
    ComplexMatrix a(cfg.dim);
    for (int n = 1; n < cfg.dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

ComplexMatrix creation(const FockConfig& cfg) { return annihilation(cfg).adjoint(); }

ComplexMatrix number_op(const FockConfig& cfg) {
    ComplexMatrix n(cfg.dim);
    for (int i = 0; i < cfg.dim; ++i) n(i, i) = static_cast<double>(i);
    return n;
}

ComplexMatrix jump_op(const FockConfig& cfg) {
    // a^k has a single nonzero diagonal: entry (n, n+k) = sqrt((n+1)...(n+k))
    ComplexMatrix l(cfg.dim);
    for (int n = 0; n + cfg.k < cfg.dim; ++n) {
        double w = 1.0;
        for (int j = 1; j <= cfg.k; ++j) w *= static_cast<double>(n + j);
        l(n, n + cfg.k) = std::sqrt(w);
    }
    const double shift = std::pow(cfg.alpha, cfg.k);
    for (int n = 0; n < cfg.dim; ++n) l(n, n) -= shift;
    return l;
}

ComplexMatrix commutator_diag(const FockConfig& cfg) {
    ComplexMatrix m(cfg.dim);
    for (int n = 0; n < cfg.dim; ++n) {
        double up = 1.0;
        for (int j = 1; j <= cfg.k; ++j) up *= static_cast<double>(n + j);
        double down = 1.0;
        for (int j = 0; j < cfg.k; ++j) down *= static_cast<double>(std::max(n - j, 0));
        m(n, n) = up - down;
    }
    return m;
}

ComplexMatrix weight_op(const FockConfig& cfg) {
    const ComplexMatrix l = jump_op(cfg);
    ComplexMatrix w = l.adjoint() * l;
    for (int i = 0; i < cfg.dim; ++i) w(i, i) += 1.0;
    w.hermitize();
    return psd_sqrt(w);
}

namespace {

void check_tail_guard(const FockConfig& cfg, double amp) {
    if (amp * amp + 10.0 * amp > static_cast<double>(cfg.dim))
        throw TailTooHeavy("coherent amplitude too large for truncation dim");
}

// Unnormalized coherent coefficients amplitude^n / sqrt(n!).
StateVector coherent_series(int dim, cplx beta) {
    StateVector v(dim, cplx(0.0, 0.0));
    cplx c = 1.0;
    v[0] = c;
    for (int n = 1; n < dim; ++n) {
        c *= beta / std::sqrt(static_cast<double>(n));
        v[n] = c;
    }
    return v;
}

}  // namespace

StateVector coherent_state(const FockConfig& cfg, cplx beta) {
    cfg.validate();
    check_tail_guard(cfg, std::abs(beta));
    StateVector v = coherent_series(cfg.dim, beta);
    vec_normalize(v);
    return v;
}

StateVector cat_state(const FockConfig& cfg, int ell) {
    cfg.validate();
    if (!(cfg.alpha > 0.0)) throw ConfigError("cat_state: alpha must be > 0");
    check_tail_guard(cfg, cfg.alpha);
    const int k = cfg.k;
    StateVector sum(cfg.dim, cplx(0.0, 0.0));
    for (int m = 1; m <= k; ++m) {
        const double theta = 2.0 * M_PI * m / k;
        const cplx leg_amp = cfg.alpha * std::polar(1.0, theta);
        const cplx phase = std::polar(1.0, 2.0 * M_PI * ell * m / k);
        StateVector leg = coherent_series(cfg.dim, leg_amp);
        // all legs share the same norm; normalize once at the end
        kernels::active_ops().zaxpy(cfg.dim, phase, leg.data(), sum.data());
    }
    vec_normalize(sum);
    return sum;
}

std::vector<StateVector> kernel_basis(const FockConfig& cfg) {
    cfg.validate();
    if (!(cfg.alpha > 0.0)) throw ConfigError("kernel_basis: alpha must be > 0");
    const int k = cfg.k;
    const double gain = std::pow(cfg.alpha, k);
    std::vector<StateVector> basis;
    basis.reserve(k);
    for (int cls = 0; cls < k && cls < cfg.dim; ++cls) {
        StateVector v(cfg.dim, cplx(0.0, 0.0));
        v[cls] = 1.0;
        for (int m = cls; m + k < cfg.dim; m += k) {
            double w = 1.0;
            for (int j = 1; j <= k; ++j) w *= static_cast<double>(m + j);
            v[m + k] = v[m] * gain / std::sqrt(w);
        }
        basis.push_back(std::move(v));
    }
    // residue classes have disjoint support, so this reduces to normalization,
    // but run the full sweep anyway
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const cplx c = vec_dot(basis[j], basis[i]);
            kernels::active_ops().zaxpy(cfg.dim, -c, basis[j].data(), basis[i].data());
        }
        vec_normalize(basis[i]);
    }
    return basis;
}

}  // namespace katlind
