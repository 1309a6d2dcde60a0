#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fwsim {

/// Broad failure classes. The CLI maps each to a distinct exit code.
enum class ErrorCategory {
    Config = 2,       // parse/validation/missing-file problems
    Domain = 3,       // mathematically invalid input (tan at 90 deg, Va <= 0, ...)
    Singularity = 4,  // Euler pitch singularity reached
    Integration = 5,  // NaN/Inf produced by the integrator
    Trim = 6,         // trim solver did not converge
    Io = 7,           // file write failure
};

std::string_view category_name(ErrorCategory c);

class SimError : public std::runtime_error {
public:
    SimError(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

class ConfigError : public SimError {
public:
    explicit ConfigError(const std::string& what) : SimError(ErrorCategory::Config, what) {}
};

class DomainError : public SimError {
public:
    explicit DomainError(const std::string& what) : SimError(ErrorCategory::Domain, what) {}
};

class IoError : public SimError {
public:
    explicit IoError(const std::string& what) : SimError(ErrorCategory::Io, what) {}
};

inline std::string_view category_name(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::Config: return "config";
        case ErrorCategory::Domain: return "domain";
        case ErrorCategory::Singularity: return "singularity";
        case ErrorCategory::Integration: return "integration";
        case ErrorCategory::Trim: return "trim";
        case ErrorCategory::Io: return "io";
    }
    return "unknown";
}

}  // namespace fwsim
