#pragma once
#include <stdexcept>
#include <string>

namespace kr {

// Structured runtime errors. The CLI maps ValidationError -> exit 2 and
// RuntimeError -> exit 3.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RuntimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutOfRange : ValidationError {
    std::string field;
    OutOfRange(const std::string& f, const std::string& bound)
        : ValidationError("out of range: " + f + " (" + bound + ")"), field(f) {}
};
struct IncompatibleDimensions : ValidationError {
    using ValidationError::ValidationError;
};
struct BasisTooSmall : ValidationError {
    using ValidationError::ValidationError;
};

struct EdgeLeak : RuntimeError {
    int member;
    long t;
    double weight;
    EdgeLeak(int mem, long t_, double w)
        : RuntimeError("edge leak: member " + std::to_string(mem) + " at t=" +
                       std::to_string(t_) + " weight=" + std::to_string(w)),
          member(mem), t(t_), weight(w) {}
};
struct PoleInDomain : ValidationError {
    using ValidationError::ValidationError;
};
struct QuadratureNotConverged : RuntimeError {
    using RuntimeError::RuntimeError;
};
struct NonSymmetric : RuntimeError {
    using RuntimeError::RuntimeError;
};
struct NotConverged : RuntimeError {
    using RuntimeError::RuntimeError;
};
struct TruncationDominates : RuntimeError {
    using RuntimeError::RuntimeError;
};
struct WindowTooNarrow : ValidationError {
    using ValidationError::ValidationError;
};
struct NoOverlap : RuntimeError {
    using RuntimeError::RuntimeError;
};
struct BranchAssignmentAmbiguous : RuntimeError {
    using RuntimeError::RuntimeError;
};
struct FitDiverged : RuntimeError {
    using RuntimeError::RuntimeError;
};
struct NotSaturated : RuntimeError {
    std::string runs;
    NotSaturated(const std::string& which)
        : RuntimeError("saturation precondition violated for runs: " + which), runs(which) {}
};

}  // namespace kr
