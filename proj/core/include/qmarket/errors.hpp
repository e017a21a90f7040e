#pragma once

#include <stdexcept>
#include <string>

namespace qmarket {

// Invalid parameters or violated preconditions (bad grid spec, beta <= 0,
// |r| >= 1, mismatched representations, ...).
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// A state whose squared norm underflowed; it cannot be normalized or averaged.
class DegenerateState : public std::runtime_error {
public:
    explicit DegenerateState(const std::string& what) : std::runtime_error(what) {}
};

// The eigensolver failed or an eigenpair missed the residual target.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// A state or density does not fit on the grid it was asked to live on.
class GridTooSmall : public std::runtime_error {
public:
    explicit GridTooSmall(const std::string& what) : std::runtime_error(what) {}
};

// File output failure; the message carries the offending path.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qmarket
