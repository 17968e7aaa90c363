#pragma once

#include <stdexcept>
#include <string>

namespace qsep {

inline constexpr const char* kToolVersion = "0.1.0";

/// Every numeric comparison in the library goes through one of these knobs.
struct Tolerances {
    double hermiticity = 1e-10;   // max |A - A^dag| entry
    double psd_slack = 1e-10;     // min eigenvalue may dip this far below 0
    double trace_slack = 1e-10;   // |Tr(rho) - 1|
    double equality = 1e-12;      // exact-identity assertions
    double relation = 1e-9;       // measurement-family defining relations
    double violation = 1e-9;      // lhs - bound before a verdict flips
    double marginal_band = 1e-6;  // |lhs - bound| below this flags "marginal"
    double bisection = 1e-6;      // feasibility search resolution
};

inline const Tolerances& tols() {
    static const Tolerances t{};
    return t;
}

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

struct ParameterRange : Error {
    explicit ParameterRange(const std::string& msg) : Error(msg) {}
};

/// Requested efficiency parameter breaks positive semidefiniteness.
/// Carries the largest feasible value found by bisection.
struct ConstructionError : Error {
    ConstructionError(const std::string& msg, double feasible)
        : Error(msg), max_feasible(feasible) {}
    double max_feasible;
};

struct SchemaError : Error {
    explicit SchemaError(const std::string& msg) : Error(msg) {}
};

struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace qsep
