#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace katlind {

using cplx = std::complex<double>;

// Error hierarchy. Every throwing precondition in the library maps to one of
// these so callers (and the CLI) can distinguish config errors from numeric
// failures.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotHermitian : Error {
    explicit NotHermitian(const std::string& msg) : Error(msg) {}
};
struct NotPSD : Error {
    explicit NotPSD(const std::string& msg) : Error(msg) {}
};
struct NotPositiveDefinite : Error {
    explicit NotPositiveDefinite(const std::string& msg) : Error(msg) {}
};
struct NoConvergence : Error {
    explicit NoConvergence(const std::string& msg) : Error(msg) {}
};
struct TailTooHeavy : Error {
    explicit TailTooHeavy(const std::string& msg) : Error(msg) {}
};
struct DimensionTooLarge : Error {
    explicit DimensionTooLarge(const std::string& msg) : Error(msg) {}
};
struct RankMismatch : Error {
    explicit RankMismatch(const std::string& msg) : Error(msg) {}
};
struct IllConditionedPairing : Error {
    explicit IllConditionedPairing(const std::string& msg) : Error(msg) {}
};
struct StepUnderflow : Error {
    explicit StepUnderflow(const std::string& msg) : Error(msg) {}
};
struct PositivityLost : Error {
    explicit PositivityLost(const std::string& msg) : Error(msg) {}
};
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};
struct SingularMatrix : Error {
    explicit SingularMatrix(const std::string& msg) : Error(msg) {}
};

}  // namespace katlind
