#include "katlind/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace katlind {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_state_snapshot(const std::string& path, const FockConfig& cfg,
                          const ComplexMatrix& state) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    // JSON written by hand to pin the 17-significant-digit number format.
    out << "{\n  \"dim\": " << cfg.dim << ",\n  \"k\": " << cfg.k
        << ",\n  \"alpha\": " << fmt17(cfg.alpha) << ",\n  \"re\": [";
    const int n = state.dim();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i != 0 || j != 0) out << ", ";
            out << fmt17(state(i, j).real());
        }
    out << "],\n  \"im\": [";
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i != 0 || j != 0) out << ", ";
            out << fmt17(state(i, j).imag());
        }
    out << "]\n}\n";
    if (!out) throw ConfigError("write failed: " + path);
}

StateSnapshot read_state_snapshot(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open: " + path);
    nlohmann::json j;
    in >> j;
    StateSnapshot snap;
    snap.cfg.dim = j.at("dim").get<int>();
    snap.cfg.k = j.at("k").get<int>();
    snap.cfg.alpha = j.at("alpha").get<double>();
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    const int n = snap.cfg.dim;
    if (static_cast<int>(re.size()) != n * n || static_cast<int>(im.size()) != n * n)
        throw ConfigError("snapshot entry count does not match dim: " + path);
    snap.state = ComplexMatrix(n);
    for (int i = 0; i < n; ++i)
        for (int j2 = 0; j2 < n; ++j2)
            snap.state(i, j2) =
                cplx(re[i * n + j2].get<double>(), im[i * n + j2].get<double>());
    return snap;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          std::size_t n_observables) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out << "t,trace,min_eig,V,l_norm,a_norm";
    for (std::size_t i = 0; i < n_observables; ++i) out << ",inv_" << i;
    out << "\n";
    for (const StepRecord& r : traj.records) {
        out << fmt17(r.t) << ',' << fmt17(r.trace) << ',' << fmt17(r.min_eig) << ','
            << fmt17(r.lyapunov) << ',' << fmt17(r.weighted_norm) << ','
            << fmt17(r.dissipation_norm);
        for (std::size_t i = 0; i < n_observables; ++i)
            out << ',' << fmt17(i < r.observable_expect.size() ? r.observable_expect[i] : 0.0);
        out << "\n";
    }
    if (!out) throw ConfigError("write failed: " + path);
}

}  // namespace katlind
