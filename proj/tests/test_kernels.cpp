#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "katlind/kernels.hpp"
#include "katlind/random.hpp"

using namespace katlind;
using kernels::KernelOps;

namespace {

std::vector<cplx> random_vec(int n, Rng& rng) {
    std::vector<cplx> v(n);
    for (cplx& z : v) z = rng.gaussian_cplx();
    return v;
}

double max_abs(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// All backends available on this machine.
std::vector<const KernelOps*> backends() {
    std::vector<const KernelOps*> v{&kernels::scalar_ops()};
    if (kernels::avx2_supported()) v.push_back(&kernels::avx2_ops());
    return v;
}

}  // namespace

TEST_CASE("zgemm matches the naive triple loop on every backend") {
    Rng rng(7);
    for (int n : {1, 2, 3, 5, 8, 17, 33}) {
        const std::vector<cplx> a = random_vec(n * n, rng);
        const std::vector<cplx> b = random_vec(n * n, rng);
        std::vector<cplx> expect(n * n, cplx(0, 0));
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l)
                for (int i = 0; i < n; ++i)
                    expect[i + j * n] += a[i + l * n] * b[l + j * n];
        for (const KernelOps* ops : backends()) {
            std::vector<cplx> c(n * n, cplx(1, 1));
            ops->zgemm(n, n, n, a.data(), n, b.data(), n, c.data(), n, false);
            CHECK(max_abs(c, expect) < 1e-13 * n);

            // accumulate variant adds on top
            std::vector<cplx> acc(n * n, cplx(0.5, -0.25));
            ops->zgemm(n, n, n, a.data(), n, b.data(), n, acc.data(), n, true);
            for (cplx& z : acc) z -= cplx(0.5, -0.25);
            CHECK(max_abs(acc, expect) < 1e-13 * n);
        }
    }
}

TEST_CASE("vector kernels agree across backends") {
    Rng rng(11);
    for (int n : {1, 2, 7, 64, 129}) {
        const std::vector<cplx> x = random_vec(n, rng);
        const std::vector<cplx> y0 = random_vec(n, rng);
        const cplx a = rng.gaussian_cplx();
        const double c = std::cos(0.7);
        const cplx s = std::sin(0.7) * std::polar(1.0, 0.3);

        // scalar reference results
        std::vector<cplx> y_ref = y0;
        kernels::scalar_ops().zaxpy(n, a, x.data(), y_ref.data());
        std::vector<cplx> xs_ref = x, ys_ref = y0;
        kernels::scalar_ops().zrot(n, xs_ref.data(), ys_ref.data(), c, s);
        const cplx dot_ref = kernels::scalar_ops().zdotc(n, x.data(), y0.data());
        const double nrm_ref = kernels::scalar_ops().znorm2sq(n, x.data());

        for (const KernelOps* ops : backends()) {
            std::vector<cplx> y = y0;
            ops->zaxpy(n, a, x.data(), y.data());
            CHECK(max_abs(y, y_ref) < 1e-14 * n);

            std::vector<cplx> xs = x, ys = y0;
            ops->zrot(n, xs.data(), ys.data(), c, s);
            CHECK(max_abs(xs, xs_ref) < 1e-14 * n);
            CHECK(max_abs(ys, ys_ref) < 1e-14 * n);

            CHECK(std::abs(ops->zdotc(n, x.data(), y0.data()) - dot_ref) < 1e-12 * n);
            CHECK(ops->znorm2sq(n, x.data()) == doctest::Approx(nrm_ref).epsilon(1e-13));

            std::vector<cplx> z = x;
            ops->zscal(n, a, z.data());
            for (int i = 0; i < n; ++i) CHECK(std::abs(z[i] - a * x[i]) < 1e-14);
        }
    }
}

TEST_CASE("zrot is unitary: norms preserved") {
    Rng rng(13);
    const int n = 40;
    std::vector<cplx> x = random_vec(n, rng), y = random_vec(n, rng);
    const double before = kernels::scalar_ops().znorm2sq(n, x.data()) +
                          kernels::scalar_ops().znorm2sq(n, y.data());
    const double c = 0.6;
    const cplx s = std::polar(0.8, -1.1);
    for (const KernelOps* ops : backends()) {
        std::vector<cplx> xr = x, yr = y;
        ops->zrot(n, xr.data(), yr.data(), c, s);
        const double after = kernels::scalar_ops().znorm2sq(n, xr.data()) +
                             kernels::scalar_ops().znorm2sq(n, yr.data());
        CHECK(after == doctest::Approx(before).epsilon(1e-13));
    }
}

TEST_CASE("backend selection") {
    CHECK(kernels::active_backend_name() != "");
    CHECK_THROWS_AS(kernels::set_active_backend("no-such-backend"), ConfigError);
    // scalar is always selectable
    const std::string before = kernels::active_backend_name();
    kernels::set_active_backend("scalar");
    CHECK(kernels::active_backend_name() == "scalar");
    kernels::set_active_backend(before);
}
