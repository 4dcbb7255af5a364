#pragma once
#include <stdexcept>
#include <string>

namespace clusterem {

// coincident points, bad indices, out-of-branch eigenvalues
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// scale combinations that leave the admissible regime (k^2 <= 0, h out of range, ...)
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// pole of T / mu, zero denominators
struct DegenerateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverError : std::runtime_error {
    SolverError(const std::string& msg, double margin_or_verdict = -1.0)
        : std::runtime_error(msg), diagnostic(margin_or_verdict) {}
    double diagnostic;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyClusterError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace clusterem
