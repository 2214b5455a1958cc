#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "katlind/lindblad.hpp"

namespace katlind {

// Per-record diagnostics along a trajectory.
struct StepRecord {
    double t = 0.0;
    double trace = 0.0;
    double min_eig = 0.0;
    double lyapunov = 0.0;          // tr(L rho L^dagger)
    double weighted_norm = 0.0;     // tr|S rho S|
    double dissipation_norm = 0.0;  // tr|S (neg generator rho) S|
    std::vector<double> observable_expect;
};

struct Trajectory {
    std::vector<double> times;  // strictly increasing, same length as records
    std::vector<StepRecord> records;
    std::vector<std::pair<double, DensityMatrix>> snapshots;
    DensityMatrix final_state;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
    int record_stride = 1;  // > 1 when long runs were thinned
};

struct IntegratorOptions {
    double tol = 1e-9;  // local error target per step, Frobenius
    std::vector<double> snapshot_times;
    std::vector<ComplexMatrix> observables;  // expectations recorded per step
    std::size_t max_records = 4000;
};

// One classic 4th-order step; re-Hermitizes the result.
DensityMatrix rk_step(const LindbladModel& model, const DensityMatrix& rho, double dt);

// Adaptive explicit integration of d(rho)/dt = generator(rho) with
// step-doubling error control. Initial dt = 0.1 / ||L^dagger L||_2 estimate,
// floor 1e-10 (StepUnderflow). Throws PositivityLost when a recorded state
// has an eigenvalue below -1e-6. tol must lie in [1e-12, 1e-4].
Trajectory integrate_rk(const LindbladModel& model, const DensityMatrix& rho0, double t_end,
                        const IntegratorOptions& opts = {});

// Resolvent-equation data: solve for rho in
//   (I + lambda L^dagger L)/2 rho + rho (I + lambda L^dagger L)/2
//     = f + r lambda L rho L^dagger.
struct ResolventProblem {
    ComplexMatrix f;
    double lambda = 1.0;
    double r = 0.0;
};

// Fixed-point solution of the resolvent equation for r < 1 via the Sylvester
// contraction series. Throws NoConvergence after 1e5 iterations.
ComplexMatrix sylvester_resolvent(const LindbladModel& model, const ResolventProblem& prob);

enum class ResolventMethod { Auto, Direct, Contraction };

// Solves rho + lambda * neg_generator(rho) = f. Direct vectorized solve by
// default for dim <= 60; the contraction path (r-continuation ending at the
// true equation) otherwise or on request.
ComplexMatrix resolvent_solve(const LindbladModel& model, const ComplexMatrix& f, double lambda,
                              ResolventMethod method = ResolventMethod::Auto);

// Reusable direct resolvent: factorizes I - lambda * generator_matrix once.
class ResolventDirect {
public:
    ResolventDirect(const LindbladModel& model, double lambda);
    ComplexMatrix solve(const ComplexMatrix& f) const;

private:
    int dim_;
    LuFactor lu_;
};

// Implicit first-order integration: n_steps resolvent steps of size
// t_end/n_steps, trace renormalized after each step.
Trajectory integrate_backward_euler(const LindbladModel& model, const DensityMatrix& rho0,
                                    double t_end, int n_steps,
                                    const IntegratorOptions& opts = {});

}  // namespace katlind
