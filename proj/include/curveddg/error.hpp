#pragma once

#include <stdexcept>
#include <string>

namespace curveddg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameterError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation (e.g. log of 0).
class DomainError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(int line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

class NonManifoldError : public Error {
public:
    using Error::Error;
};

/// Chart failure, invalid curved element (C_K >= 1), degenerate map or face.
class GeometryError : public Error {
public:
    using Error::Error;
};

class NotSpdError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double best_residual)
        : Error(what), best_residual_(best_residual) {}
    double best_residual() const noexcept { return best_residual_; }

private:
    double best_residual_;
};

} // namespace curveddg
