#include "katlind/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "katlind/fock.hpp"
#include "katlind/kernels.hpp"

namespace katlind {

std::vector<LabeledInvariant> explicit_invariants(const FockConfig& cfg) {
    cfg.validate();
    const int k = cfg.k;
    std::vector<LabeledInvariant> out;
    const int n_cos = (k - 1 + 1) / 2 + 1;  // ceil((k-1)/2) + 1
    const int n_sin = (k - 1) / 2;
    for (int m = 0; m < n_cos; ++m) {
        LabeledInvariant inv;
        inv.label = "cos_" + std::to_string(m);
        inv.m = m;
        inv.is_sin = false;
        inv.op = ComplexMatrix(cfg.dim);
        for (int n = 0; n < cfg.dim; ++n)
            inv.op(n, n) = std::cos(2.0 * M_PI * m * n / k);
        out.push_back(std::move(inv));
    }
    for (int m = 1; m <= n_sin; ++m) {
        LabeledInvariant inv;
        inv.label = "sin_" + std::to_string(m);
        inv.m = m;
        inv.is_sin = true;
        inv.op = ComplexMatrix(cfg.dim);
        for (int n = 0; n < cfg.dim; ++n)
            inv.op(n, n) = std::sin(2.0 * M_PI * m * n / k);
        out.push_back(std::move(inv));
    }
    return out;
}

namespace {

double real_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
    const int nn = a.dim() * a.dim();
    return kernels::active_ops().zdotc(nn, a.data(), b.data()).real();
}

// Gram-Schmidt over the real vector space of Hermitian matrices. Keeps
// vectors that retain at least `keep` of their norm after projection.
std::vector<ComplexMatrix> real_orthonormalize(std::vector<ComplexMatrix> cand, double keep) {
    std::vector<ComplexMatrix> basis;
    for (ComplexMatrix& c : cand) {
        const double before = c.frobenius_norm();
        if (before <= 0.0) continue;
        for (const ComplexMatrix& b : basis) {
            const double proj = real_inner(b, c);
            kernels::active_ops().zaxpy(c.dim() * c.dim(), cplx(-proj, 0.0), b.data(), c.data());
        }
        const double after = c.frobenius_norm();
        if (after > keep * before) {
            c *= cplx(1.0 / after, 0.0);
            c.hermitize();
            basis.push_back(std::move(c));
        }
    }
    return basis;
}

struct BlockSvd {
    std::vector<std::pair<int, int>> pairs;  // Fock (i, j) pairs of the class
    Svd svd;
};

// One residue-class block of the superoperator, decomposed.
BlockSvd block_svd(const LindbladModel& model, std::vector<std::pair<int, int>> pairs) {
    const int dim = model.config().dim;
    const int m = static_cast<int>(pairs.size());
    ComplexMatrix block(m);
    ComplexMatrix basis(dim);
    for (int c = 0; c < m; ++c) {
        basis.set_zero();
        basis(pairs[c].first, pairs[c].second) = 1.0;
        const ComplexMatrix image = model.apply_generator_any(basis);
        for (int rr = 0; rr < m; ++rr) block(rr, c) = image(pairs[rr].first, pairs[rr].second);
    }
    return BlockSvd{std::move(pairs), hestenes_svd(block)};
}

// Scatter a block-coordinate vector back into a dim x dim matrix.
ComplexMatrix scatter(const std::vector<std::pair<int, int>>& pairs, const cplx* col, int dim) {
    ComplexMatrix x(dim);
    for (std::size_t c = 0; c < pairs.size(); ++c) x(pairs[c].first, pairs[c].second) = col[c];
    return x;
}

// Right null vectors: V columns with sigma <= thresh.
void extract_right_null(const BlockSvd& b, double thresh, int dim,
                        std::vector<ComplexMatrix>& out) {
    const int m = static_cast<int>(b.pairs.size());
    for (int j = 0; j < m; ++j)
        if (b.svd.sigma[j] <= thresh) out.push_back(scatter(b.pairs, b.svd.v.col(j), dim));
}

// Left null vectors as the orthogonal complement of the range (the
// positive-sigma left singular vectors), seeded with the canonical
// directions least covered by the range.
void extract_left_null(const BlockSvd& b, double thresh, int dim,
                       std::vector<ComplexMatrix>& out) {
    const int m = static_cast<int>(b.pairs.size());
    int rank = 0;
    while (rank < m && b.svd.sigma[rank] > thresh) ++rank;
    const int want = m - rank;
    if (want == 0) return;

    std::vector<double> row_cover(m, 0.0);
    for (int j = 0; j < rank; ++j)
        for (int i = 0; i < m; ++i) row_cover[i] += std::norm(b.svd.u(i, j));
    std::vector<int> seeds(m);
    std::iota(seeds.begin(), seeds.end(), 0);
    std::sort(seeds.begin(), seeds.end(),
              [&](int x, int y) { return row_cover[x] < row_cover[y]; });

    std::vector<std::vector<cplx>> found;
    auto& ops = kernels::active_ops();
    for (int s : seeds) {
        if (static_cast<int>(found.size()) == want) break;
        std::vector<cplx> v(m, cplx(0.0, 0.0));
        v[s] = 1.0;
        for (int j = 0; j < rank; ++j) {
            const cplx p = ops.zdotc(m, b.svd.u.col(j), v.data());
            ops.zaxpy(m, -p, b.svd.u.col(j), v.data());
        }
        for (const auto& f : found) {
            const cplx p = ops.zdotc(m, f.data(), v.data());
            ops.zaxpy(m, -p, f.data(), v.data());
        }
        const double nrm = std::sqrt(ops.znorm2sq(m, v.data()));
        if (nrm > 1e-3) {
            ops.zscal(m, cplx(1.0 / nrm, 0.0), v.data());
            found.push_back(std::move(v));
        }
    }
    for (const auto& f : found) out.push_back(scatter(b.pairs, f.data(), dim));
}

std::vector<ComplexMatrix> hermitize_null_family(const std::vector<ComplexMatrix>& raw) {
    std::vector<ComplexMatrix> cand;
    cand.reserve(2 * raw.size());
    for (const ComplexMatrix& x : raw) {
        ComplexMatrix h = x;
        h += x.adjoint();
        h *= cplx(0.5, 0.0);
        h.hermitize();
        cand.push_back(std::move(h));
        ComplexMatrix a = x;
        a -= x.adjoint();
        a *= cplx(0.0, -0.5);
        a.hermitize();
        cand.push_back(std::move(a));
    }
    return real_orthonormalize(std::move(cand), 1e-4);
}

}  // namespace

InvariantSet numeric_invariants(const LindbladModel& model) {
    const FockConfig& cfg = model.config();
    const int dim = cfg.dim;
    const int k = cfg.k;
    if (static_cast<long long>(dim) * dim > 40000)
        throw DimensionTooLarge("numeric_invariants: dim^2 exceeds 40000");

    std::vector<std::vector<std::pair<int, int>>> classes(k);
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i < dim; ++i) classes[((i - j) % k + k) % k].emplace_back(i, j);

    std::vector<BlockSvd> blocks;
    blocks.reserve(k);
    double sigma_max = 0.0;
    for (int r = 0; r < k; ++r) {
        blocks.push_back(block_svd(model, std::move(classes[r])));
        if (!blocks.back().svd.sigma.empty())
            sigma_max = std::max(sigma_max, blocks.back().svd.sigma.front());
    }

    constexpr double kNullRel = 1e-8;
    const double thresh = kNullRel * sigma_max;

    std::vector<double> all_sigma;
    for (const BlockSvd& b : blocks)
        all_sigma.insert(all_sigma.end(), b.svd.sigma.begin(), b.svd.sigma.end());
    std::sort(all_sigma.begin(), all_sigma.end());
    const int null_count = static_cast<int>(
        std::count_if(all_sigma.begin(), all_sigma.end(), [&](double s) { return s <= thresh; }));
    const int want = k * k;
    double gap = 0.0;
    if (static_cast<int>(all_sigma.size()) > want) {
        const double lo = all_sigma[want - 1];
        const double hi = all_sigma[want];
        gap = (lo > 0.0) ? hi / lo : std::numeric_limits<double>::infinity();
    }

    auto diag_message = [&](const char* what) {
        std::ostringstream os;
        os << what << ": null count " << null_count << " (expected " << want << "), threshold "
           << thresh << ", smallest singular values:";
        for (int i = 0; i < std::min<int>(want + 3, static_cast<int>(all_sigma.size())); ++i)
            os << ' ' << all_sigma[i];
        os << ", gap ratio " << gap;
        return os.str();
    };
    if (null_count != want) throw RankMismatch(diag_message("numeric_invariants"));
    if (!(gap > 1e3)) throw RankMismatch(diag_message("numeric_invariants gap"));

    std::vector<ComplexMatrix> raw_right, raw_left;
    for (const BlockSvd& b : blocks) {
        extract_right_null(b, thresh, dim, raw_right);
        extract_left_null(b, thresh, dim, raw_left);
    }
    if (static_cast<int>(raw_left.size()) != want)
        throw RankMismatch(diag_message("numeric_invariants adjoint null"));

    InvariantSet set;
    set.sigma_max = sigma_max;
    set.null_gap_ratio = gap;
    set.smallest_sigmas.assign(
        all_sigma.begin(),
        all_sigma.begin() + std::min<std::size_t>(all_sigma.size(), want + 3));
    set.steady_basis = hermitize_null_family(raw_right);
    set.observables = hermitize_null_family(raw_left);
    if (static_cast<int>(set.steady_basis.size()) != want ||
        static_cast<int>(set.observables.size()) != want)
        throw RankMismatch(diag_message("numeric_invariants hermitian sector"));

    for (const ComplexMatrix& q : set.observables) {
        const double res = model.apply_adjoint_generator(q).frobenius_norm() /
                           std::max(q.frobenius_norm(), 1e-300);
        set.max_observable_residual = std::max(set.max_observable_residual, res);
    }
    for (const ComplexMatrix& s : set.steady_basis) {
        const double res = model.apply_generator_any(s).frobenius_norm() / sigma_max;
        set.max_steady_residual = std::max(set.max_steady_residual, res);
    }

    set.pairing.resize(static_cast<std::size_t>(want) * want);
    for (int i = 0; i < want; ++i)
        for (int j = 0; j < want; ++j)
            set.pairing[i * want + j] = real_inner(set.observables[i], set.steady_basis[j]);

    ComplexMatrix p(want);
    for (int i = 0; i < want; ++i)
        for (int j = 0; j < want; ++j) p(i, j) = set.pairing[i * want + j];
    const Svd psvd = hestenes_svd(p);
    const double smin = psvd.sigma.back();
    set.pairing_condition =
        (smin > 0.0) ? psvd.sigma.front() / smin : std::numeric_limits<double>::infinity();
    return set;
}

DensityMatrix predict_limit(const LindbladModel& model, const InvariantSet& inv,
                            const DensityMatrix& rho0) {
    const int want = static_cast<int>(inv.observables.size());
    if (!(inv.pairing_condition <= 1e8))
        throw IllConditionedPairing("predict_limit: pairing condition exceeds 1e8");

    std::vector<cplx> q(want);
    for (int i = 0; i < want; ++i) q[i] = real_inner(inv.observables[i], rho0.mat());

    ComplexMatrix p(want);
    for (int i = 0; i < want; ++i)
        for (int j = 0; j < want; ++j) p(i, j) = inv.pairing[i * want + j];
    const std::vector<cplx> c = LuFactor(p).solve(std::move(q));

    ComplexMatrix out(model.config().dim);
    for (int j = 0; j < want; ++j)
        kernels::active_ops().zaxpy(out.dim() * out.dim(), c[j], inv.steady_basis[j].data(),
                                    out.data());
    out.hermitize();
    return DensityMatrix::trusted(std::move(out));
}

std::vector<CatEigenRow> cat_eigen_report(const FockConfig& cfg) {
    if (!(cfg.alpha > 0.0)) throw ConfigError("cat_eigen_report: alpha must be > 0");
    std::vector<CatEigenRow> rows;
    const std::vector<LabeledInvariant> invs = explicit_invariants(cfg);
    for (int ell = 0; ell < cfg.k; ++ell) {
        const StateVector cat = cat_state(cfg, ell);
        for (const LabeledInvariant& inv : invs) {
            const StateVector qv = matvec(inv.op, cat);
            const double mu = vec_dot(cat, qv).real();
            StateVector resid = qv;
            kernels::active_ops().zaxpy(cfg.dim, cplx(-mu, 0.0), cat.data(), resid.data());
            CatEigenRow row;
            row.label = inv.label;
            row.m = inv.m;
            row.ell = ell;
            row.is_sin = inv.is_sin;
            row.measured = mu;
            const double angle = 2.0 * M_PI * inv.m * ell / cfg.k;
            row.expected_magnitude = std::abs(inv.is_sin ? std::sin(angle) : std::cos(angle));
            row.residual = vec_norm(resid);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

}  // namespace katlind
