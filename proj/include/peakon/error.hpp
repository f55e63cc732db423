#pragma once

#include <stdexcept>
#include <string>

namespace peakon {

// Bad user input or configuration. The CLI maps this to exit code 1.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

// Configuration that is well formed but not implemented (e.g. circle with n != 2).
class UnsupportedError : public std::logic_error {
public:
    explicit UnsupportedError(const std::string& msg) : std::logic_error(msg) {}
};

// Numerical failure: non-convergent quadrature, divergent norm, crossed collision.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

class DivergenceError : public NumericalError {
public:
    explicit DivergenceError(const std::string& msg) : NumericalError(msg) {}
};

class SingularityError : public NumericalError {
public:
    explicit SingularityError(const std::string& msg) : NumericalError(msg) {}
};

class CollisionCrossedError : public NumericalError {
public:
    explicit CollisionCrossedError(const std::string& msg) : NumericalError(msg) {}
};

class MissingDataError : public std::runtime_error {
public:
    explicit MissingDataError(const std::string& msg) : std::runtime_error(msg) {}
};

class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace peakon
