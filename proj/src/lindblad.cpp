#include "katlind/lindblad.hpp"

#include <cmath>

#include "katlind/kernels.hpp"

namespace katlind {

DensityMatrix DensityMatrix::validated(ComplexMatrix m) {
    const double fro = m.frobenius_norm();
    if (fro > 0.0 && m.asymmetry() > 1e-11 * fro)
        throw NotHermitian("DensityMatrix: not Hermitian");
    if (std::abs(m.trace() - cplx(1.0, 0.0)) > 1e-9)
        throw ConfigError("DensityMatrix: trace differs from one");
    ComplexMatrix h = m;
    h.hermitize();
    const std::vector<double> w = hermitian_eigenvalues(h);
    if (!w.empty() && w.front() < -1e-8)
        throw NotPSD("DensityMatrix: negative eigenvalue below -1e-8");
    return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::trusted(ComplexMatrix m) { return DensityMatrix(std::move(m)); }

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
    StateVector n = psi;
    vec_normalize(n);
    return DensityMatrix(outer(n, n));
}

DensityMatrix DensityMatrix::fock_state(int dim, int n) {
    ComplexMatrix m(dim);
    m(n, n) = 1.0;
    return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::mixture(const std::vector<StateVector>& states,
                                     const std::vector<double>& weights) {
    const int dim = static_cast<int>(states.at(0).size());
    ComplexMatrix m(dim);
    double total = 0.0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        const ComplexMatrix p = outer(states[i], states[i]);
        kernels::active_ops().zaxpy(dim * dim, cplx(weights[i], 0.0), p.data(), m.data());
        total += weights[i];
    }
    m *= cplx(1.0 / total, 0.0);
    return DensityMatrix(std::move(m));
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    ComplexMatrix d = a.mat();
    d -= b.mat();
    d.hermitize();
    return 0.5 * trace_norm(d);
}

LindbladModel::LindbladModel(const FockConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    jump_ = jump_op(cfg_);
    jump_adj_ = jump_.adjoint();
    gram_ = jump_adj_ * jump_;
    gram_.hermitize();
    comm_ = commutator_diag(cfg_);

    ComplexMatrix s2 = gram_;
    for (int i = 0; i < cfg_.dim; ++i) s2(i, i) += 1.0;
    weight_ = psd_sqrt(s2);

    // power iteration on L^dagger L
    StateVector v(cfg_.dim, cplx(0.0, 0.0));
    for (int i = 0; i < cfg_.dim; ++i) v[i] = cplx(1.0 / std::sqrt(cfg_.dim), 0.0);
    double lam = 1.0;
    for (int it = 0; it < 30; ++it) {
        StateVector w = matvec(gram_, v);
        lam = vec_norm(w);
        if (lam == 0.0) break;
        vec_normalize(w);
        v = std::move(w);
    }
    gram_norm_ = std::max(lam, 1.0);
}

ComplexMatrix LindbladModel::apply_generator(const ComplexMatrix& rho) const {
    const double fro = rho.frobenius_norm();
    if (fro > 0.0 && rho.asymmetry() > 1e-11 * fro)
        throw NotHermitian("apply_generator: rho is not Hermitian");
    ComplexMatrix out(cfg_.dim), scratch(cfg_.dim);
    generator_into(rho, out, scratch);
    return out;
}

void LindbladModel::generator_into(const ComplexMatrix& rho, ComplexMatrix& out,
                                   ComplexMatrix& scratch) const {
    const int n = cfg_.dim;
    if (out.dim() != n) out = ComplexMatrix(n);
    if (scratch.dim() != n) scratch = ComplexMatrix(n);
    // scratch = L rho ; out = scratch L^dagger
    matmul_into(scratch, jump_, rho, false);
    matmul_into(out, scratch, jump_adj_, false);
    // scratch = W rho ; out -= (scratch + scratch^dagger)/2  (rho Hermitian)
    matmul_into(scratch, gram_, rho, false);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            out(i, j) -= 0.5 * (scratch(i, j) + std::conj(scratch(j, i)));
}

ComplexMatrix LindbladModel::apply_generator_any(const ComplexMatrix& rho) const {
    ComplexMatrix t = jump_ * rho;
    ComplexMatrix out = t * jump_adj_;
    ComplexMatrix wr = gram_ * rho;
    ComplexMatrix rw = rho * gram_;
    const int n = cfg_.dim;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) out(i, j) -= 0.5 * (wr(i, j) + rw(i, j));
    return out;
}

ComplexMatrix LindbladModel::apply_neg_generator(const ComplexMatrix& rho) const {
    ComplexMatrix out = apply_generator(rho);
    out *= cplx(-1.0, 0.0);
    return out;
}

ComplexMatrix LindbladModel::apply_adjoint_generator(const ComplexMatrix& q) const {
    ComplexMatrix t = jump_adj_ * q;
    ComplexMatrix out = t * jump_;
    ComplexMatrix wq = gram_ * q;
    ComplexMatrix qw = q * gram_;
    const int n = cfg_.dim;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) out(i, j) -= 0.5 * (wq(i, j) + qw(i, j));
    return out;
}

ComplexMatrix LindbladModel::generator_matrix() const {
    const int n = cfg_.dim;
    if (static_cast<long long>(n) * n > 40000)
        throw DimensionTooLarge("generator_matrix: dim^2 exceeds 40000");
    // conj(L) (x) L - (I (x) W + W^T (x) I)/2 under column stacking
    const ComplexMatrix eye = ComplexMatrix::identity(n);
    ComplexMatrix m = kron(jump_.conj(), jump_);
    ComplexMatrix half = kron(eye, gram_) + kron(gram_.transpose(), eye);
    half *= cplx(-0.5, 0.0);
    m += half;
    return m;
}

ComplexMatrix LindbladModel::adjoint_generator_matrix() const {
    const int n = cfg_.dim;
    if (static_cast<long long>(n) * n > 40000)
        throw DimensionTooLarge("adjoint_generator_matrix: dim^2 exceeds 40000");
    // L^T (x) L^dagger - (I (x) W + W^T (x) I)/2
    const ComplexMatrix eye = ComplexMatrix::identity(n);
    ComplexMatrix m = kron(jump_.transpose(), jump_adj_);
    ComplexMatrix half = kron(eye, gram_) + kron(gram_.transpose(), eye);
    half *= cplx(-0.5, 0.0);
    m += half;
    return m;
}

double LindbladModel::weighted_trace_norm(const ComplexMatrix& rho) const {
    const double fro = rho.frobenius_norm();
    if (fro > 0.0 && rho.asymmetry() > 1e-11 * fro)
        throw NotHermitian("weighted_trace_norm: rho is not Hermitian");
    ComplexMatrix srs = weight_ * rho * weight_;
    srs.hermitize();
    return trace_norm(srs);
}

double LindbladModel::lyapunov_raw(const ComplexMatrix& rho) const {
    // tr(L rho L^dagger) = <W, rho>_F for Hermitian rho
    cplx t = 0.0;
    const int n = cfg_.dim;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) t += gram_(j, i) * rho(i, j);
    return t.real();
}

double LindbladModel::lyapunov(const DensityMatrix& rho) const {
    return std::max(0.0, lyapunov_raw(rho.mat()));
}

}  // namespace katlind
