#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace fraccont {

// All library errors carry a stable name (e.g. "NonPositiveAlpha") that the
// CLI propagates verbatim.  ValidationError maps to exit code 2, SolverError
// to exit code 1.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(name + ": " + what), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    using Error::Error;
};

[[noreturn]] inline void fail_validation(const std::string& name, const std::string& what) {
    throw ValidationError(name, what);
}

[[noreturn]] inline void fail_solver(const std::string& name, const std::string& what) {
    throw SolverError(name, what);
}

} // namespace fraccont
