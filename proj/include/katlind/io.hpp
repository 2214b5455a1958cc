#pragma once

#include <string>
#include <vector>

#include "katlind/evolve.hpp"
#include "katlind/fock.hpp"

namespace katlind {

// Lossless double formatting (17 significant digits).
std::string fmt17(double x);

// State snapshot: {dim, k, alpha, re: row-major, im: row-major}. Doubles are
// serialized with 17 significant digits, so write-then-read is bit-exact.
void write_state_snapshot(const std::string& path, const FockConfig& cfg,
                          const ComplexMatrix& state);

struct StateSnapshot {
    FockConfig cfg;
    ComplexMatrix state;
};
StateSnapshot read_state_snapshot(const std::string& path);

// Trajectory CSV with header t,trace,min_eig,V,l_norm,a_norm,inv_0,...
void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          std::size_t n_observables);

}  // namespace katlind
