#pragma once

#include <stdexcept>
#include <string>

namespace roasel {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& msg, int iterations)
        : Error(msg), iterations_(iterations) {}
    int iterations() const { return iterations_; }

private:
    int iterations_;
};

class SingularMatrixError : public Error {
public:
    explicit SingularMatrixError(const std::string& msg) : Error(msg) {}
};

/// Swap of adjacent Schur blocks failed; carries the offending block pair.
class ReorderError : public Error {
public:
    ReorderError(const std::string& msg, int first_block, int second_block)
        : Error(msg), first_(first_block), second_(second_block) {}
    int first_block() const { return first_; }
    int second_block() const { return second_; }

private:
    int first_;
    int second_;
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

/// Eigenvalues too close to the imaginary axis for a stable/anti-stable split.
class CenterSpectrumError : public Error {
public:
    explicit CenterSpectrumError(const std::string& msg) : Error(msg) {}
};

class NoStabilizingSolutionError : public Error {
public:
    explicit NoStabilizingSolutionError(const std::string& msg) : Error(msg) {}
};

}  // namespace roasel
