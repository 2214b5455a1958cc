#include "katlind/evolve.hpp"

#include <algorithm>
#include <cmath>

#include "katlind/kernels.hpp"

namespace katlind {
namespace {

constexpr double kMinStep = 1e-10;
constexpr int kMaxFixedPointIters = 100000;

// Workspace for RK4 stages.
struct RkWork {
    ComplexMatrix k1, k2, k3, k4, stage, scratch;
    explicit RkWork(int n) : k1(n), k2(n), k3(n), k4(n), stage(n), scratch(n) {}
};

// out = rho + dt/6 (k1 + 2 k2 + 2 k3 + k4), stages evaluated via the model.
void rk4_into(const LindbladModel& model, const ComplexMatrix& rho, double dt, RkWork& w,
              ComplexMatrix& out) {
    const int n = rho.dim();
    const int nn = n * n;
    auto& ops = kernels::active_ops();

    model.generator_into(rho, w.k1, w.scratch);

    w.stage = rho;
    ops.zaxpy(nn, cplx(0.5 * dt, 0.0), w.k1.data(), w.stage.data());
    model.generator_into(w.stage, w.k2, w.scratch);

    w.stage = rho;
    ops.zaxpy(nn, cplx(0.5 * dt, 0.0), w.k2.data(), w.stage.data());
    model.generator_into(w.stage, w.k3, w.scratch);

    w.stage = rho;
    ops.zaxpy(nn, cplx(dt, 0.0), w.k3.data(), w.stage.data());
    model.generator_into(w.stage, w.k4, w.scratch);

    out = rho;
    ops.zaxpy(nn, cplx(dt / 6.0, 0.0), w.k1.data(), out.data());
    ops.zaxpy(nn, cplx(dt / 3.0, 0.0), w.k2.data(), out.data());
    ops.zaxpy(nn, cplx(dt / 3.0, 0.0), w.k3.data(), out.data());
    ops.zaxpy(nn, cplx(dt / 6.0, 0.0), w.k4.data(), out.data());
}

StepRecord make_record(const LindbladModel& model, const ComplexMatrix& rho, double t,
                       const std::vector<ComplexMatrix>& observables) {
    StepRecord rec;
    rec.t = t;
    rec.trace = rho.trace().real();
    rec.min_eig = hermitian_eigenvalues(rho).front();
    rec.lyapunov = model.lyapunov_raw(rho);
    rec.weighted_norm = model.weighted_trace_norm(rho);
    ComplexMatrix lrho = model.apply_generator(rho);
    lrho.hermitize();
    rec.dissipation_norm = model.weighted_trace_norm(lrho);
    rec.observable_expect.reserve(observables.size());
    const int n = rho.dim();
    for (const ComplexMatrix& q : observables) {
        cplx e = 0.0;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) e += q(j, i) * rho(i, j);
        rec.observable_expect.push_back(e.real());
    }
    if (rec.min_eig < -1e-6) throw PositivityLost("trajectory state lost positivity");
    return rec;
}

// Accumulates records with adaptive thinning so long stiff runs keep a
// bounded diagnostics table.
class RecordBuffer {
public:
    RecordBuffer(Trajectory& traj, std::size_t max_records)
        : traj_(traj), max_records_(std::max<std::size_t>(max_records, 16)) {}

    void push(const LindbladModel& model, const ComplexMatrix& rho, double t,
              const std::vector<ComplexMatrix>& observables, bool force) {
        if (!force && (counter_++ % stride_) != 0) return;
        if (traj_.records.size() >= max_records_) thin();
        traj_.times.push_back(t);
        traj_.records.push_back(make_record(model, rho, t, observables));
    }

private:
    void thin() {
        std::vector<double> times;
        std::vector<StepRecord> recs;
        for (std::size_t i = 0; i < traj_.records.size(); i += 2) {
            times.push_back(traj_.times[i]);
            recs.push_back(std::move(traj_.records[i]));
        }
        traj_.times = std::move(times);
        traj_.records = std::move(recs);
        stride_ *= 2;
        traj_.record_stride = stride_;
    }

    Trajectory& traj_;
    std::size_t max_records_;
    std::size_t counter_ = 0;
    int stride_ = 1;
};

}  // namespace

DensityMatrix rk_step(const LindbladModel& model, const DensityMatrix& rho, double dt) {
    RkWork w(rho.dim());
    ComplexMatrix out;
    rk4_into(model, rho.mat(), dt, w, out);
    out.hermitize();
    return DensityMatrix::trusted(std::move(out));
}

Trajectory integrate_rk(const LindbladModel& model, const DensityMatrix& rho0, double t_end,
                        const IntegratorOptions& opts) {
    if (!(opts.tol >= 1e-12 && opts.tol <= 1e-4))
        throw ConfigError("integrate_rk: tol must lie in [1e-12, 1e-4]");
    if (t_end < 0.0) throw ConfigError("integrate_rk: negative t_end");

    const int n = model.config().dim;
    Trajectory traj;
    RecordBuffer records(traj, opts.max_records);

    // event times where the stepper must land exactly
    std::vector<double> events = opts.snapshot_times;
    events.push_back(t_end);
    std::sort(events.begin(), events.end());
    std::size_t next_event = 0;
    auto snapshot_requested = [&](double t) {
        for (double st : opts.snapshot_times)
            if (std::abs(st - t) <= 1e-12 * std::max(1.0, t_end)) return true;
        return false;
    };

    ComplexMatrix rho = rho0.mat();
    rho.hermitize();
    double t = 0.0;
    records.push(model, rho, t, opts.observables, true);
    if (snapshot_requested(0.0)) traj.snapshots.emplace_back(0.0, DensityMatrix::trusted(rho));

    if (t_end == 0.0) {
        traj.final_state = DensityMatrix::trusted(std::move(rho));
        return traj;
    }

    RkWork w(n);
    ComplexMatrix full(n), half(n), fine(n);
    double dt = 0.1 / model.gram_norm_estimate();
    auto& ops = kernels::active_ops();

    while (t < t_end) {
        while (next_event < events.size() && events[next_event] <= t + 1e-15) ++next_event;
        const double limit = (next_event < events.size()) ? events[next_event] : t_end;
        bool clipped = false;
        double h = dt;
        if (t + h >= limit - 1e-15) {
            h = limit - t;
            clipped = true;
        }

        rk4_into(model, rho, h, w, full);
        rk4_into(model, rho, 0.5 * h, w, half);
        half.hermitize();
        rk4_into(model, half, 0.5 * h, w, fine);
        fine.hermitize();

        // Richardson error estimate between one h-step and two h/2-steps
        ComplexMatrix diff = fine;
        ops.zaxpy(n * n, cplx(-1.0, 0.0), full.data(), diff.data());
        const double err = diff.frobenius_norm() / 15.0;

        if (err <= opts.tol) {
            t += h;
            rho = fine;
            ++traj.accepted_steps;
            const bool at_event = clipped;
            records.push(model, rho, t, opts.observables, at_event || t >= t_end);
            if (at_event && snapshot_requested(t))
                traj.snapshots.emplace_back(t, DensityMatrix::trusted(rho));
            const double grow =
                (err > 0.0) ? std::clamp(0.9 * std::pow(opts.tol / err, 0.2), 0.3, 2.0) : 2.0;
            if (!clipped) dt = h * grow;
            else dt = std::max(dt, h);
        } else {
            ++traj.rejected_steps;
            dt = h * std::clamp(0.9 * std::pow(opts.tol / err, 0.2), 0.1, 0.9);
            if (dt < kMinStep) throw StepUnderflow("integrate_rk: step size underflow");
        }
    }

    traj.final_state = DensityMatrix::trusted(std::move(rho));
    return traj;
}

namespace {

// Fixed-point iteration xi = f + r*lambda*L*Pi(xi)*L^dagger with Pi the
// Sylvester solve against (I + lambda W)/2. Supports r = 1 (the resolvent
// itself); in the truncated space the iteration matrix has spectral radius
// strictly below one.
ComplexMatrix resolvent_fixed_point(const LindbladModel& model, const SylvesterSolver& pi,
                                    const ComplexMatrix& f, double lambda, double r,
                                    ComplexMatrix xi_start) {
    const int n = f.dim();
    const double fnorm = std::max(f.frobenius_norm(), 1e-300);
    ComplexMatrix xi = std::move(xi_start);
    if (xi.dim() != n) xi = f;
    ComplexMatrix rho(n), t(n), next(n);
    auto& ops = kernels::active_ops();
    for (int it = 0; it < kMaxFixedPointIters; ++it) {
        rho = pi.solve(xi);
        matmul_into(t, model.jump(), rho, false);
        matmul_into(next, t, model.jump_adjoint(), false);
        next *= cplx(r * lambda, 0.0);
        next += f;
        ComplexMatrix delta = next;
        ops.zaxpy(n * n, cplx(-1.0, 0.0), xi.data(), delta.data());
        xi = next;
        if (delta.frobenius_norm() <= 1e-13 * fnorm) {
            rho = pi.solve(xi);
            rho.hermitize();
            return rho;
        }
    }
    throw NoConvergence("resolvent fixed point: iteration cap reached");
}

ComplexMatrix half_weight_shifted(const LindbladModel& model, double lambda) {
    ComplexMatrix a = model.jump_gram();
    a *= cplx(lambda, 0.0);
    for (int i = 0; i < a.dim(); ++i) a(i, i) += 1.0;
    a *= cplx(0.5, 0.0);
    a.hermitize();
    return a;
}

}  // namespace

ComplexMatrix sylvester_resolvent(const LindbladModel& model, const ResolventProblem& prob) {
    if (!(prob.lambda > 0.0)) throw ConfigError("sylvester_resolvent: lambda must be > 0");
    if (!(prob.r >= 0.0 && prob.r < 1.0))
        throw ConfigError("sylvester_resolvent: r must lie in [0, 1)");
    const SylvesterSolver pi(half_weight_shifted(model, prob.lambda));
    return resolvent_fixed_point(model, pi, prob.f, prob.lambda, prob.r, prob.f);
}

ComplexMatrix resolvent_solve(const LindbladModel& model, const ComplexMatrix& f, double lambda,
                              ResolventMethod method) {
    if (!(lambda > 0.0)) throw ConfigError("resolvent_solve: lambda must be > 0");
    const int n = model.config().dim;
    if (method == ResolventMethod::Auto)
        method = (n <= 60) ? ResolventMethod::Direct : ResolventMethod::Contraction;

    if (method == ResolventMethod::Direct) {
        return ResolventDirect(model, lambda).solve(f);
    }

    // r-continuation, warm-starting each stage, finishing at the true
    // equation r = 1.
    const SylvesterSolver pi(half_weight_shifted(model, lambda));
    static constexpr double kSchedule[] = {0.0, 0.5, 0.9, 0.99, 0.999, 1.0};
    ComplexMatrix xi = f;
    ComplexMatrix rho;
    for (double r : kSchedule) {
        rho = resolvent_fixed_point(model, pi, f, lambda, r, xi);
        // warm start for the next stage: xi = f + r*lambda*L rho L^dagger
        ComplexMatrix t = model.jump() * rho;
        xi = t * model.jump_adjoint();
        xi *= cplx(r * lambda, 0.0);
        xi += f;
    }
    return rho;
}

ResolventDirect::ResolventDirect(const LindbladModel& model, double lambda)
    : dim_(model.config().dim), lu_([&] {
          ComplexMatrix m = model.generator_matrix();
          m *= cplx(-lambda, 0.0);
          const int nn = dim_ * dim_;
          for (int i = 0; i < nn; ++i) m(i, i) += 1.0;
          return m;
      }()) {}

ComplexMatrix ResolventDirect::solve(const ComplexMatrix& f) const {
    ComplexMatrix rho = unvectorize(lu_.solve(vectorize(f)), dim_);
    rho.hermitize();
    return rho;
}

Trajectory integrate_backward_euler(const LindbladModel& model, const DensityMatrix& rho0,
                                    double t_end, int n_steps, const IntegratorOptions& opts) {
    if (n_steps < 1) throw ConfigError("integrate_backward_euler: n_steps must be >= 1");
    if (t_end < 0.0) throw ConfigError("integrate_backward_euler: negative t_end");

    const int n = model.config().dim;
    const double lambda = t_end / n_steps;
    Trajectory traj;
    RecordBuffer records(traj, opts.max_records);

    ComplexMatrix rho = rho0.mat();
    rho.hermitize();
    records.push(model, rho, 0.0, opts.observables, true);

    if (t_end == 0.0) {
        traj.final_state = DensityMatrix::trusted(std::move(rho));
        return traj;
    }

    std::optional<ResolventDirect> direct;
    if (n <= 60) direct.emplace(model, lambda);

    std::size_t next_snapshot = 0;
    std::vector<double> snaps = opts.snapshot_times;
    std::sort(snaps.begin(), snaps.end());

    for (int step = 1; step <= n_steps; ++step) {
        rho = direct ? direct->solve(rho)
                     : resolvent_solve(model, rho, lambda, ResolventMethod::Contraction);
        const double tr = rho.trace().real();
        if (tr != 0.0) rho *= cplx(1.0 / tr, 0.0);
        const double t = lambda * step;
        ++traj.accepted_steps;
        records.push(model, rho, t, opts.observables, step == n_steps);
        while (next_snapshot < snaps.size() && snaps[next_snapshot] <= t + 1e-12) {
            traj.snapshots.emplace_back(t, DensityMatrix::trusted(rho));
            ++next_snapshot;
        }
    }

    traj.final_state = DensityMatrix::trusted(std::move(rho));
    return traj;
}

}  // namespace katlind
