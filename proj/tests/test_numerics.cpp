#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "katlind/numerics.hpp"
#include "katlind/random.hpp"
#include "testutil.hpp"

using namespace katlind;
using testutil::rel_diff;

namespace {

ComplexMatrix diag(std::initializer_list<double> d) {
    ComplexMatrix m(static_cast<int>(d.size()));
    int i = 0;
    for (double x : d) m(i, i) = x, ++i;
    return m;
}

double reconstruction_residual(const ComplexMatrix& a, const EigDecomposition& e) {
    const int n = a.dim();
    ComplexMatrix lam(n);
    for (int i = 0; i < n; ++i) lam(i, i) = e.eigenvalues[i];
    ComplexMatrix rebuilt = e.eigenvectors * lam * e.eigenvectors.adjoint();
    rebuilt -= a;
    return rebuilt.frobenius_norm();
}

double unitarity_residual(const ComplexMatrix& u) {
    ComplexMatrix g = u.adjoint() * u;
    for (int i = 0; i < u.dim(); ++i) g(i, i) -= 1.0;
    return g.frobenius_norm();
}

}  // namespace

TEST_CASE("hermitian_eig: diagonal input is returned as-is") {
    const EigDecomposition e = hermitian_eig(diag({1, 2, 3}));
    CHECK(e.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(e.eigenvalues[1] == doctest::Approx(2.0));
    CHECK(e.eigenvalues[2] == doctest::Approx(3.0));
    ComplexMatrix u = e.eigenvectors;
    for (int i = 0; i < 3; ++i) CHECK(std::abs(std::abs(u(i, i)) - 1.0) < 1e-14);
}

TEST_CASE("hermitian_eig: 2x2 exchange matrix") {
    ComplexMatrix a(2);
    a(0, 1) = 1.0;
    a(1, 0) = 1.0;
    const EigDecomposition e = hermitian_eig(a);
    CHECK(e.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(e.eigenvalues[1] == doctest::Approx(1.0));
    CHECK(reconstruction_residual(a, e) < 1e-14);
}

TEST_CASE("hermitian_eig: residual invariants on random Hermitian inputs") {
    Rng rng(101);
    for (int n : {5, 12, 20, 40}) {
        const ComplexMatrix a = random_hermitian(n, rng);
        const EigDecomposition e = hermitian_eig(a);
        const double fro = a.frobenius_norm();
        CHECK(reconstruction_residual(a, e) <= 1e-11 * fro);
        CHECK(unitarity_residual(e.eigenvectors) <= 1e-11);
        for (std::size_t i = 1; i < e.eigenvalues.size(); ++i)
            CHECK(e.eigenvalues[i] >= e.eigenvalues[i - 1]);
    }
}

TEST_CASE("hermitian_eig rejects non-Hermitian input") {
    ComplexMatrix a(3);
    a(0, 1) = 1.0;
    a(1, 0) = 0.5;  // asymmetric
    CHECK_THROWS_AS(hermitian_eig(a), NotHermitian);
}

TEST_CASE("trace_norm: PSD matrices give the trace") {
    Rng rng(102);
    const ComplexMatrix p = random_psd_unit_trace(9, rng);
    CHECK(trace_norm(p) == doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("trace_norm: diag(1,-2) -> 3") {
    CHECK(trace_norm(diag({1, -2})) == doctest::Approx(3.0));
}

TEST_CASE("trace_norm matches the sum of singular values") {
    Rng rng(103);
    const ComplexMatrix a = random_hermitian(14, rng);
    // independent oracle: singular values via eigenvalues of A^dagger A
    ComplexMatrix gram = a.adjoint() * a;
    gram.hermitize();
    double oracle = 0.0;
    for (double w : hermitian_eigenvalues(gram)) oracle += std::sqrt(std::max(w, 0.0));
    CHECK(trace_norm(a) == doctest::Approx(oracle).epsilon(1e-11));
}

TEST_CASE("trace_norm is a norm: triangle inequality and homogeneity") {
    Rng rng(104);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 8;
        const ComplexMatrix a = random_hermitian(n, rng);
        const ComplexMatrix b = random_hermitian(n, rng);
        ComplexMatrix sum = a;
        sum += b;
        CHECK(trace_norm(sum) <= trace_norm(a) + trace_norm(b) + 1e-10);
        const double s = -2.75;
        ComplexMatrix scaled = a;
        scaled *= cplx(s, 0.0);
        CHECK(trace_norm(scaled) == doctest::Approx(std::abs(s) * trace_norm(a)).epsilon(1e-10));
    }
}

TEST_CASE("split_pos_neg: PSD input returns (A, 0)") {
    Rng rng(105);
    const ComplexMatrix p = random_psd_unit_trace(7, rng);
    const PosNegParts parts = split_pos_neg(p);
    CHECK(rel_diff(parts.pos, p) < 1e-11);
    CHECK(parts.neg.frobenius_norm() < 1e-11);
}

TEST_CASE("split_pos_neg: explicit diagonal") {
    const PosNegParts parts = split_pos_neg(diag({1, -2}));
    CHECK(parts.pos(0, 0).real() == doctest::Approx(1.0));
    CHECK(parts.pos(1, 1).real() == doctest::Approx(0.0));
    CHECK(parts.neg(0, 0).real() == doctest::Approx(0.0));
    CHECK(parts.neg(1, 1).real() == doctest::Approx(2.0));
}

TEST_CASE("split_pos_neg invariants on random Hermitian inputs") {
    Rng rng(106);
    const ComplexMatrix a = random_hermitian(11, rng);
    const PosNegParts parts = split_pos_neg(a);
    ComplexMatrix back = parts.pos;
    back -= parts.neg;
    CHECK(rel_diff(back, a) < 1e-11);
    CHECK(trace_norm(a) ==
          doctest::Approx(parts.pos.trace().real() + parts.neg.trace().real()).epsilon(1e-10));
    const ComplexMatrix prod = parts.pos * parts.neg;
    CHECK(prod.frobenius_norm() <= 1e-10 * std::max(1.0, a.frobenius_norm()));
}

TEST_CASE("psd_sqrt: identity and explicit diagonal") {
    const ComplexMatrix r = psd_sqrt(ComplexMatrix::identity(4));
    CHECK(rel_diff(r, ComplexMatrix::identity(4)) < 1e-13);
    const ComplexMatrix d = psd_sqrt(diag({4, 9}));
    CHECK(d(0, 0).real() == doctest::Approx(2.0));
    CHECK(d(1, 1).real() == doctest::Approx(3.0));
}

TEST_CASE("psd_sqrt squares back on random PSD input") {
    Rng rng(107);
    ComplexMatrix p = random_psd_unit_trace(10, rng);
    p *= cplx(7.5, 0.0);  // non-trivial scale
    const ComplexMatrix r = psd_sqrt(p);
    ComplexMatrix sq = r * r;
    sq -= p;
    CHECK(sq.frobenius_norm() <= 1e-10 * p.frobenius_norm());
    CHECK(hermitian_eigenvalues(r).front() >= -1e-12);
}

TEST_CASE("psd_sqrt rejects indefinite input, clamps round-off negatives") {
    CHECK_THROWS_AS(psd_sqrt(diag({1.0, -1e-6})), NotPSD);
    const ComplexMatrix ok = psd_sqrt(diag({1.0, -5e-11}));
    CHECK(ok(1, 1).real() == doctest::Approx(0.0));
}

TEST_CASE("sylvester_solve: A = I gives X/2, diagonal A divides elementwise") {
    Rng rng(108);
    const ComplexMatrix x = random_hermitian(6, rng);
    const ComplexMatrix r = sylvester_solve(ComplexMatrix::identity(6), x);
    ComplexMatrix half = x;
    half *= cplx(0.5, 0.0);
    CHECK(rel_diff(r, half) < 1e-12);

    const ComplexMatrix a = diag({1, 2, 5});
    const ComplexMatrix x3 = random_hermitian(3, rng);
    const ComplexMatrix r3 = sylvester_solve(a, x3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(std::abs(r3(i, j) - x3(i, j) / (a(i, i).real() + a(j, j).real())) < 1e-12);
}

TEST_CASE("sylvester_solve: plug-back residual and Hermitian output") {
    Rng rng(109);
    const int n = 12;
    ComplexMatrix a = random_psd_unit_trace(n, rng);
    a *= cplx(double(n), 0.0);
    for (int i = 0; i < n; ++i) a(i, i) += 1.0;  // safely positive definite
    const ComplexMatrix x = random_hermitian(n, rng);
    const ComplexMatrix rho = sylvester_solve(a, x);
    ComplexMatrix resid = a * rho;
    resid += rho * a;
    resid -= x;
    CHECK(resid.frobenius_norm() <= 1e-10 * x.frobenius_norm());
    CHECK(rho.asymmetry() <= 1e-11 * rho.frobenius_norm());
}

TEST_CASE("sylvester_solve rejects indefinite A") {
    CHECK_THROWS_AS(sylvester_solve(diag({1, -1}), ComplexMatrix::identity(2)), NotPositiveDefinite);
}

TEST_CASE("hestenes_svd: factorization and orthogonality on random input") {
    Rng rng(110);
    const int n = 18;
    ComplexMatrix b(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) b(i, j) = rng.gaussian_cplx();
    const Svd svd = hestenes_svd(b);
    // descending
    for (int i = 1; i < n; ++i) CHECK(svd.sigma[i] <= svd.sigma[i - 1] + 1e-13);
    CHECK(unitarity_residual(svd.v) < 1e-11);
    CHECK(unitarity_residual(svd.u) < 1e-11);
    ComplexMatrix us(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) us(i, j) = svd.u(i, j) * svd.sigma[j];
    ComplexMatrix rebuilt = us * svd.v.adjoint();
    rebuilt -= b;
    CHECK(rebuilt.frobenius_norm() <= 1e-12 * b.frobenius_norm());
}

TEST_CASE("hestenes_svd resolves tiny singular values without Gram squaring") {
    // B = U0 diag(1, 1e-4, 1e-13) V0^dagger with random unitaries: the small
    // value sits far below the sqrt(eps)*sigma_max floor of an eig-of-B^+B
    // route and must still come out right.
    Rng rng(111);
    const int n = 3;
    const Svd u0 = hestenes_svd([&] {
        ComplexMatrix g(n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) g(i, j) = rng.gaussian_cplx();
        return g;
    }());
    const Svd v0 = hestenes_svd([&] {
        ComplexMatrix g(n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) g(i, j) = rng.gaussian_cplx();
        return g;
    }());
    const double vals[3] = {1.0, 1e-4, 1e-13};
    ComplexMatrix mid(n);
    for (int i = 0; i < n; ++i) mid(i, i) = vals[i];
    const ComplexMatrix b = u0.u * mid * v0.u.adjoint();
    const Svd svd = hestenes_svd(b);
    CHECK(svd.sigma[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(svd.sigma[1] == doctest::Approx(1e-4).epsilon(1e-10));
    CHECK(svd.sigma[2] == doctest::Approx(1e-13).epsilon(1e-2));
}

TEST_CASE("LuFactor solves random systems") {
    Rng rng(112);
    const int n = 25;
    ComplexMatrix a(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) a(i, j) = rng.gaussian_cplx();
    std::vector<cplx> x_true(n);
    for (cplx& z : x_true) z = rng.gaussian_cplx();
    std::vector<cplx> b(n, cplx(0, 0));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) b[i] += a(i, j) * x_true[j];
    const std::vector<cplx> x = LuFactor(a).solve(b);
    double err = 0.0;
    for (int i = 0; i < n; ++i) err = std::max(err, std::abs(x[i] - x_true[i]));
    CHECK(err < 1e-10);
}

TEST_CASE("LuFactor throws on a singular matrix") {
    ComplexMatrix a(2);
    a(0, 0) = 1.0;
    a(0, 1) = 2.0;  // second row zero
    CHECK_THROWS_AS(LuFactor(a), SingularMatrix);
}

TEST_CASE("subspace_sin_angle: identical and orthogonal spans") {
    StateVector e0{1, 0, 0, 0}, e1{0, 1, 0, 0}, e2{0, 0, 1, 0};
    CHECK(subspace_sin_angle({e0}, {e0, e1}) < 1e-14);
    CHECK(subspace_sin_angle({e2}, {e0, e1}) == doctest::Approx(1.0));
    // rotated basis spanning the same plane
    StateVector m0{std::sqrt(0.5), std::sqrt(0.5), 0, 0};
    StateVector m1{std::sqrt(0.5), -std::sqrt(0.5), 0, 0};
    CHECK(subspace_sin_angle({m0, m1}, {e0, e1}) < 1e-13);
}
