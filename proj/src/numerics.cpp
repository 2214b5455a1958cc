#include "katlind/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "katlind/kernels.hpp"

namespace katlind {
namespace {

constexpr int kMaxJacobiSweeps = 100;
constexpr double kOffdiagFactor = 1e-14;
constexpr double kAsymmetryTol = 1e-12;

// Unitary 2x2 rotation J = [[c, s], [-conj(s), c]] diagonalizing the
// Hermitian block [[app, apq], [conj(apq), aqq]]. Returns false when the
// off-diagonal entry is exactly zero.
struct JacobiRotation {
    double c;
    cplx s;
    double new_pp;
    double new_qq;
};

bool make_rotation(double app, double aqq, cplx apq, JacobiRotation& rot) {
    const double r = std::abs(apq);
    if (r == 0.0) return false;
    const cplx phase = apq / r;
    const double tau = (app - aqq) / (2.0 * r);
    // roots of t^2 - 2*tau*t - 1 = 0; pick the smaller magnitude one
    const double root = std::sqrt(1.0 + tau * tau);
    const double t1 = tau + root;
    const double t2 = tau - root;
    const double t = (std::abs(t1) <= std::abs(t2)) ? t1 : t2;
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double sig = t * c;
    rot.c = c;
    rot.s = sig * phase;
    rot.new_pp = app * c * c - 2.0 * c * sig * r + sig * sig * aqq;
    rot.new_qq = aqq * c * c + 2.0 * c * sig * r + sig * sig * app;
    return true;
}

double offdiag_norm(const ComplexMatrix& a) {
    const int n = a.dim();
    double s = 0.0;
    for (int q = 0; q < n; ++q)
        for (int p = 0; p < n; ++p)
            if (p != q) s += std::norm(a(p, q));
    return std::sqrt(s);
}

void check_hermitian(const ComplexMatrix& a, const char* who) {
    const double fro = a.frobenius_norm();
    if (fro == 0.0) return;
    if (a.asymmetry() > kAsymmetryTol * fro)
        throw NotHermitian(std::string(who) + ": input is not Hermitian");
}

EigDecomposition jacobi_eig(const ComplexMatrix& A, bool with_vectors) {
    check_hermitian(A, "hermitian_eig");
    const int n = A.dim();
    ComplexMatrix a = A;
    a.hermitize();
    ComplexMatrix u = with_vectors ? ComplexMatrix::identity(n) : ComplexMatrix();

    const double target = kOffdiagFactor * a.frobenius_norm();
    const double skip = (n > 0) ? target / n : 0.0;
    auto& ops = kernels::active_ops();

    bool converged = (n <= 1);
    for (int sweep = 0; sweep < kMaxJacobiSweeps && !converged; ++sweep) {
        if (offdiag_norm(a) <= target) {
            converged = true;
            break;
        }
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                if (std::abs(apq) <= skip) continue;
                JacobiRotation rot;
                if (!make_rotation(a(p, p).real(), a(q, q).real(), apq, rot)) continue;
                const cplx ms_conj = -std::conj(rot.s);
                // columns: [colp, colq] <- [c*colp - conj(s)*colq, s*colp + c*colq]
                ops.zrot(n, a.col(p), a.col(q), rot.c, ms_conj);
                // rows: rowp <- c*rowp - s*rowq ; rowq <- conj(s)*rowp + c*rowq
                {
                    const cplx s = rot.s;
                    const cplx sc = std::conj(s);
                    for (int j = 0; j < n; ++j) {
                        const cplx xp = a(p, j);
                        const cplx xq = a(q, j);
                        a(p, j) = rot.c * xp - s * xq;
                        a(q, j) = rot.c * xq + sc * xp;
                    }
                }
                // pin the analytically known values; kills round-off drift
                a(p, p) = rot.new_pp;
                a(q, q) = rot.new_qq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                if (with_vectors) ops.zrot(n, u.col(p), u.col(q), rot.c, ms_conj);
            }
        }
    }
    if (!converged && offdiag_norm(a) > target)
        throw NoConvergence("hermitian_eig: Jacobi sweep limit reached");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

    EigDecomposition out;
    out.eigenvalues.resize(n);
    for (int i = 0; i < n; ++i) out.eigenvalues[i] = a(order[i], order[i]).real();
    if (with_vectors) {
        out.eigenvectors = ComplexMatrix(n);
        for (int i = 0; i < n; ++i)
            std::copy(u.col(order[i]), u.col(order[i]) + n, out.eigenvectors.col(i));
    }
    return out;
}

// out = U * diag(f(w)) * U^dagger
ComplexMatrix assemble_from_eig(const EigDecomposition& e, const std::vector<double>& d) {
    const int n = e.eigenvectors.dim();
    ComplexMatrix scaled = e.eigenvectors;
    for (int j = 0; j < n; ++j)
        kernels::active_ops().zscal(n, cplx(d[j], 0.0), scaled.col(j));
    ComplexMatrix out(n);
    const ComplexMatrix uh = e.eigenvectors.adjoint();
    matmul_into(out, scaled, uh, false);
    return out;
}

}  // namespace

EigDecomposition hermitian_eig(const ComplexMatrix& A) { return jacobi_eig(A, true); }

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& A) {
    return jacobi_eig(A, false).eigenvalues;
}

double trace_norm(const ComplexMatrix& A) {
    const std::vector<double> w = hermitian_eigenvalues(A);
    double s = 0.0;
    for (double x : w) s += std::abs(x);
    return s;
}

PosNegParts split_pos_neg(const ComplexMatrix& A) {
    const EigDecomposition e = hermitian_eig(A);
    const int n = A.dim();
    std::vector<double> dp(n), dn(n);
    for (int i = 0; i < n; ++i) {
        dp[i] = std::max(e.eigenvalues[i], 0.0);
        dn[i] = std::max(-e.eigenvalues[i], 0.0);
    }
    PosNegParts parts{assemble_from_eig(e, dp), assemble_from_eig(e, dn)};
    parts.pos.hermitize();
    parts.neg.hermitize();
    return parts;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& A) {
    const EigDecomposition e = hermitian_eig(A);
    const int n = A.dim();
    std::vector<double> d(n);
    for (int i = 0; i < n; ++i) {
        double w = e.eigenvalues[i];
        if (w < -1e-10) throw NotPSD("psd_sqrt: eigenvalue below -1e-10");
        d[i] = std::sqrt(std::max(w, 0.0));
    }
    ComplexMatrix r = assemble_from_eig(e, d);
    r.hermitize();
    return r;
}

SylvesterSolver::SylvesterSolver(const ComplexMatrix& A) : eig_(hermitian_eig(A)) {
    for (double w : eig_.eigenvalues)
        if (w <= 1e-12)
            throw NotPositiveDefinite("sylvester_solve: matrix is not positive definite");
    basis_adjoint_ = eig_.eigenvectors.adjoint();
}

ComplexMatrix SylvesterSolver::solve(const ComplexMatrix& X) const {
    const int n = X.dim();
    ComplexMatrix t(n), xt(n);
    matmul_into(t, basis_adjoint_, X, false);
    matmul_into(xt, t, eig_.eigenvectors, false);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            xt(i, j) /= (eig_.eigenvalues[i] + eig_.eigenvalues[j]);
    matmul_into(t, eig_.eigenvectors, xt, false);
    ComplexMatrix out(n);
    matmul_into(out, t, basis_adjoint_, false);
    return out;
}

ComplexMatrix sylvester_solve(const ComplexMatrix& A, const ComplexMatrix& X) {
    check_hermitian(X, "sylvester_solve (rhs)");
    return SylvesterSolver(A).solve(X);
}

Svd hestenes_svd(const ComplexMatrix& B) {
    const int n = B.dim();
    ComplexMatrix w = B;
    ComplexMatrix v = ComplexMatrix::identity(n);
    auto& ops = kernels::active_ops();

    std::vector<double> nrm2(n);
    auto refresh_norms = [&] {
        for (int j = 0; j < n; ++j) nrm2[j] = ops.znorm2sq(n, w.col(j));
    };
    refresh_norms();

    constexpr double kOrthoTol = 1e-13;
    constexpr int kMaxSweeps = 60;
    bool converged = (n <= 1);
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        refresh_norms();
        const double top = *std::max_element(nrm2.begin(), nrm2.end());
        const double floor2 = top * 1e-28;  // columns at round-off level
        int significant = 0;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cplx hpq = ops.zdotc(n, w.col(p), w.col(q));
                const double bound = std::sqrt(nrm2[p] * nrm2[q]);
                if (std::abs(hpq) <= kOrthoTol * bound) continue;
                JacobiRotation rot;
                if (!make_rotation(nrm2[p], nrm2[q], hpq, rot)) continue;
                if (std::max(nrm2[p], nrm2[q]) > floor2) ++significant;
                const cplx ms_conj = -std::conj(rot.s);
                ops.zrot(n, w.col(p), w.col(q), rot.c, ms_conj);
                ops.zrot(n, v.col(p), v.col(q), rot.c, ms_conj);
                nrm2[p] = std::max(rot.new_pp, 0.0);
                nrm2[q] = std::max(rot.new_qq, 0.0);
            }
        }
        if (significant == 0) converged = true;
    }
    if (!converged) throw NoConvergence("hestenes_svd: sweep limit reached");

    refresh_norms();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return nrm2[i] > nrm2[j]; });

    Svd out;
    out.sigma.resize(n);
    out.u = ComplexMatrix(n);
    out.v = ComplexMatrix(n);
    for (int j = 0; j < n; ++j) {
        const int src = order[j];
        const double s = std::sqrt(nrm2[src]);
        out.sigma[j] = s;
        std::copy(v.col(src), v.col(src) + n, out.v.col(j));
        if (s > 0.0) {
            std::copy(w.col(src), w.col(src) + n, out.u.col(j));
            ops.zscal(n, cplx(1.0 / s, 0.0), out.u.col(j));
        }
    }
    return out;
}

LuFactor::LuFactor(ComplexMatrix A) : lu_(std::move(A)), perm_(lu_.dim()) {
    const int n = lu_.dim();
    std::iota(perm_.begin(), perm_.end(), 0);
    auto& ops = kernels::active_ops();
    for (int i = 0; i < n; ++i) {
        int piv = i;
        double best = std::abs(lu_(i, i));
        for (int r = i + 1; r < n; ++r) {
            const double m = std::abs(lu_(r, i));
            if (m > best) {
                best = m;
                piv = r;
            }
        }
        if (best == 0.0) throw SingularMatrix("lu: exact zero pivot");
        if (piv != i) {
            std::swap(perm_[i], perm_[piv]);
            for (int j = 0; j < n; ++j) std::swap(lu_(i, j), lu_(piv, j));
        }
        const cplx inv_p = 1.0 / lu_(i, i);
        ops.zscal(n - i - 1, inv_p, &lu_(i + 1, i));
        for (int j = i + 1; j < n; ++j) {
            const cplx f = lu_(i, j);
            if (f.real() == 0.0 && f.imag() == 0.0) continue;
            ops.zaxpy(n - i - 1, -f, &lu_(i + 1, i), &lu_(i + 1, j));
        }
    }
}

std::vector<cplx> LuFactor::solve(std::vector<cplx> b) const {
    const int n = lu_.dim();
    std::vector<cplx> x(n);
    for (int i = 0; i < n; ++i) x[i] = b[perm_[i]];
    // forward: unit lower
    for (int j = 0; j < n; ++j) {
        const cplx xj = x[j];
        if (xj.real() == 0.0 && xj.imag() == 0.0) continue;
        for (int i = j + 1; i < n; ++i) x[i] -= lu_(i, j) * xj;
    }
    // backward: upper
    for (int j = n - 1; j >= 0; --j) {
        x[j] /= lu_(j, j);
        const cplx xj = x[j];
        for (int i = 0; i < j; ++i) x[i] -= lu_(i, j) * xj;
    }
    return x;
}

double subspace_sin_angle(const std::vector<StateVector>& v, const std::vector<StateVector>& w) {
    // residual r_i = v_i - W W^dagger v_i; sin(theta_max) = sigma_max(R)
    const std::size_t n = v.empty() ? 0 : v[0].size();
    std::vector<StateVector> resid = v;
    for (auto& r : resid) {
        for (const auto& wc : w) {
            const cplx c = kernels::active_ops().zdotc(static_cast<int>(n), wc.data(), r.data());
            kernels::active_ops().zaxpy(static_cast<int>(n), -c, wc.data(), r.data());
        }
    }
    // Gram of the residuals is tiny (p x p); its largest eigenvalue is
    // sigma_max^2, accurate enough for the largest value.
    const int p = static_cast<int>(resid.size());
    ComplexMatrix g(p);
    for (int j = 0; j < p; ++j)
        for (int i = 0; i < p; ++i)
            g(i, j) = kernels::active_ops().zdotc(static_cast<int>(n), resid[i].data(),
                                                  resid[j].data());
    g.hermitize();
    const std::vector<double> ev = hermitian_eigenvalues(g);
    return std::sqrt(std::max(0.0, ev.empty() ? 0.0 : ev.back()));
}

}  // namespace katlind
