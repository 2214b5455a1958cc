// Command-line front end: simulate, resolvent, invariants, predict,
// verify-all. Exit codes: 0 ok, 1 config error, 2 numeric failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "katlind/evolve.hpp"
#include "katlind/invariants.hpp"
#include "katlind/io.hpp"
#include "katlind/random.hpp"
#include "katlind/verify.hpp"

namespace {

using namespace katlind;

struct RunConfig {
    int k = 2;
    double alpha = 1.5;
    int dim = 0;  // 0: derive from the guard heuristic
    double t_end = 8.0;
    double tol = 1e-9;
    std::string integrator = "rk";
    int be_steps = 200;
    unsigned long long seed = 1;
    std::string out_dir;
    std::string initial = "fock:0";
    std::vector<double> snapshot_times;

    FockConfig fock() const {
        FockConfig cfg;
        cfg.k = k;
        cfg.alpha = alpha;
        cfg.dim = dim > 0 ? dim : FockConfig::default_dim(k, alpha);
        cfg.validate();
        if (!cfg.meets_guard())
            std::cerr << "warning: dim " << cfg.dim << " is below the guard band "
                      << FockConfig::guard_dim(k, alpha) << "; truncation artifacts likely\n";
        return cfg;
    }

    std::filesystem::path out_path(const std::string& name) const {
        std::string dir = out_dir;
        if (dir.empty()) {
            if (const char* env = std::getenv("KATLIND_OUT")) dir = env;
        }
        if (dir.empty()) dir = ".";
        std::filesystem::create_directories(dir);
        return std::filesystem::path(dir) / name;
    }
};

// Initial-state specs: fock:N | coherent:RE[,IM] | cat:ELL | random[:SUPPORT]
// | file:PATH
DensityMatrix parse_initial(const RunConfig& rc, const FockConfig& cfg) {
    const std::string& s = rc.initial;
    const auto colon = s.find(':');
    const std::string kind = s.substr(0, colon);
    const std::string arg = (colon == std::string::npos) ? "" : s.substr(colon + 1);
    if (kind == "fock") {
        const int n = arg.empty() ? 0 : std::stoi(arg);
        if (n < 0 || n >= cfg.dim) throw ConfigError("initial fock level out of range");
        return DensityMatrix::fock_state(cfg.dim, n);
    }
    if (kind == "coherent") {
        double re = 0.0, im = 0.0;
        std::istringstream is(arg);
        char comma;
        is >> re;
        if (is >> comma) is >> im;
        return DensityMatrix::pure(coherent_state(cfg, cplx(re, im)));
    }
    if (kind == "cat") {
        const int ell = arg.empty() ? 0 : std::stoi(arg);
        return DensityMatrix::pure(cat_state(cfg, ell));
    }
    if (kind == "random") {
        const int support = arg.empty() ? std::max(2, cfg.dim / 3) : std::stoi(arg);
        Rng rng(rc.seed);
        return random_density(cfg.dim, support, rng);
    }
    if (kind == "file") {
        StateSnapshot snap = read_state_snapshot(arg);
        if (snap.cfg.dim != cfg.dim)
            throw ConfigError("snapshot dim does not match run config");
        return DensityMatrix::validated(std::move(snap.state));
    }
    throw ConfigError("unknown initial-state spec: " + s);
}

IntegratorOptions integrator_options(const RunConfig& rc, const FockConfig& cfg) {
    IntegratorOptions io;
    io.tol = rc.tol;
    io.snapshot_times = rc.snapshot_times;
    for (const LabeledInvariant& inv : explicit_invariants(cfg)) io.observables.push_back(inv.op);
    return io;
}

int cmd_simulate(const RunConfig& rc) {
    const FockConfig cfg = rc.fock();
    const LindbladModel model(cfg);
    const DensityMatrix rho0 = parse_initial(rc, cfg);
    const IntegratorOptions io = integrator_options(rc, cfg);

    Trajectory traj;
    if (rc.integrator == "rk")
        traj = integrate_rk(model, rho0, rc.t_end, io);
    else if (rc.integrator == "backward_euler")
        traj = integrate_backward_euler(model, rho0, rc.t_end, rc.be_steps, io);
    else
        throw ConfigError("unknown integrator: " + rc.integrator);

    write_trajectory_csv(rc.out_path("trajectory.csv").string(), traj, io.observables.size());
    for (const auto& [t, state] : traj.snapshots) {
        std::ostringstream name;
        name << "snapshot_t" << t << ".json";
        write_state_snapshot(rc.out_path(name.str()).string(), cfg, state.mat());
    }
    write_state_snapshot(rc.out_path("final_state.json").string(), cfg, traj.final_state.mat());
    std::cout << "wrote " << traj.records.size() << " records ("
              << traj.accepted_steps << " steps, " << traj.rejected_steps << " rejected) to "
              << rc.out_path("trajectory.csv").string() << "\n";
    return 0;
}

int cmd_resolvent(const RunConfig& rc, double lambda, const std::string& method) {
    const FockConfig cfg = rc.fock();
    const LindbladModel model(cfg);
    const DensityMatrix f = parse_initial(rc, cfg);
    ResolventMethod m = ResolventMethod::Auto;
    if (method == "direct") m = ResolventMethod::Direct;
    else if (method == "contraction") m = ResolventMethod::Contraction;
    else if (method != "auto") throw ConfigError("unknown resolvent method: " + method);

    const ComplexMatrix rho = resolvent_solve(model, f.mat(), lambda, m);
    const double in_norm = model.weighted_trace_norm(f.mat());
    const double out_norm = model.weighted_trace_norm(rho);
    const double floor = hermitian_eigenvalues(rho).front();
    write_state_snapshot(rc.out_path("resolvent.json").string(), cfg, rho);
    std::cout << "lambda " << lambda << ": weighted norm " << in_norm << " -> " << out_norm
              << " (contraction " << (out_norm <= in_norm + 1e-8 ? "ok" : "VIOLATED")
              << "), min eigenvalue " << floor << "\n";
    return (out_norm <= in_norm + 1e-8 && floor >= -1e-9) ? 0 : 2;
}

int cmd_invariants(const RunConfig& rc) {
    const FockConfig cfg = rc.fock();
    const LindbladModel model(cfg);
    const InvariantSet inv = numeric_invariants(model);

    nlohmann::json j;
    j["k"] = cfg.k;
    j["alpha"] = cfg.alpha;
    j["dim"] = cfg.dim;
    j["observable_count"] = inv.observables.size();
    j["steady_count"] = inv.steady_basis.size();
    j["null_gap_ratio"] = inv.null_gap_ratio;
    j["sigma_max"] = inv.sigma_max;
    j["smallest_sigmas"] = inv.smallest_sigmas;
    j["pairing_condition"] = inv.pairing_condition;
    j["max_observable_residual"] = inv.max_observable_residual;
    j["max_steady_residual"] = inv.max_steady_residual;
    if (cfg.alpha > 0.0) {
        j["cat_eigen"] = nlohmann::json::array();
        for (const CatEigenRow& row : cat_eigen_report(cfg)) {
            j["cat_eigen"].push_back({{"label", row.label},
                                      {"ell", row.ell},
                                      {"measured", row.measured},
                                      {"expected_magnitude", row.expected_magnitude},
                                      {"residual", row.residual}});
        }
    }
    std::ofstream(rc.out_path("invariants.json")) << j.dump(2) << "\n";
    std::cout << "found " << inv.observables.size() << " conserved observables, gap ratio "
              << inv.null_gap_ratio << ", pairing condition " << inv.pairing_condition << "\n";
    return 0;
}

int cmd_predict(const RunConfig& rc, bool compare_rk) {
    const FockConfig cfg = rc.fock();
    const LindbladModel model(cfg);
    const DensityMatrix rho0 = parse_initial(rc, cfg);
    const InvariantSet inv = numeric_invariants(model);
    const DensityMatrix predicted = predict_limit(model, inv, rho0);

    write_state_snapshot(rc.out_path("predicted_limit.json").string(), cfg, predicted.mat());
    const double floor = hermitian_eigenvalues(predicted.mat()).front();
    std::cout << "predicted limit: trace " << predicted.mat().trace().real()
              << ", eigenvalue floor " << floor << "\n";
    if (compare_rk) {
        const Trajectory traj =
            integrate_rk(model, rho0, rc.t_end, integrator_options(rc, cfg));
        std::cout << "trace distance to integrated endpoint at t=" << rc.t_end << ": "
                  << trace_distance(predicted, traj.final_state) << "\n";
    }
    return 0;
}

int cmd_verify_all(const RunConfig& rc, const std::vector<int>& ks, int dim_override) {
    VerifyOptions opts;
    if (!ks.empty()) opts.ks = ks;
    opts.dim_override = dim_override;
    opts.seed = rc.seed;
    const VerificationReport rep = run_verification(opts);
    std::ofstream(rc.out_path("verify_report.json")) << report_to_json(rep) << "\n";
    print_report_table(rep, std::cout);
    return rep.all_pass() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"truncated Fock-space simulator for the k-photon driven-damped oscillator"};
    app.set_config("--config", "", "flat key=value config file; flags override");

    RunConfig rc;
    app.add_option("--k", rc.k, "photon order (>= 1)");
    app.add_option("--alpha", rc.alpha, "drive amplitude (real, >= 0)");
    app.add_option("--dim", rc.dim, "Fock truncation (0: guard heuristic default)");
    app.add_option("--t-end", rc.t_end, "integration horizon");
    app.add_option("--tol", rc.tol, "RK local error tolerance");
    app.add_option("--integrator", rc.integrator, "rk | backward_euler");
    app.add_option("--steps", rc.be_steps, "backward Euler step count");
    app.add_option("--seed", rc.seed, "seed for random initial states");
    app.add_option("--out", rc.out_dir, "output directory (default: $KATLIND_OUT or .)");
    app.add_option("--initial", rc.initial,
                   "initial state: fock:N | coherent:RE[,IM] | cat:ELL | random[:SUPPORT] | "
                   "file:PATH");
    app.add_option("--snapshot-times", rc.snapshot_times, "times to store state snapshots at");

    auto* sim = app.add_subcommand("simulate", "integrate a trajectory, write CSV + snapshots");
    double lambda = 0.1;
    std::string method = "auto";
    auto* res = app.add_subcommand("resolvent", "apply one resolvent step to the initial state");
    res->add_option("--lambda", lambda, "resolvent step size (> 0)");
    res->add_option("--method", method, "auto | direct | contraction");
    auto* invc = app.add_subcommand("invariants", "conserved observables and steady basis");
    bool compare_rk = false;
    auto* pred = app.add_subcommand("predict", "predict the limit state from the invariants");
    pred->add_flag("--compare-rk", compare_rk, "also integrate and report the trace distance");
    std::vector<int> verify_ks;
    int verify_dim_override = 0;
    auto* ver = app.add_subcommand("verify-all", "run the full verification suite");
    ver->add_option("--only-k", verify_ks, "restrict to these photon orders");
    ver->add_option("--force-dim", verify_dim_override,
                    "override truncation in every check (negative control)");
    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
        if (*sim) return cmd_simulate(rc);
        if (*res) return cmd_resolvent(rc, lambda, method);
        if (*invc) return cmd_invariants(rc);
        if (*pred) return cmd_predict(rc, compare_rk);
        if (*ver) return cmd_verify_all(rc, verify_ks, verify_dim_override);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const TailTooHeavy& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
