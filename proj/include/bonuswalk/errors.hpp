#pragma once

// Error taxonomy. ValidationError -> CLI exit 2, NumericError (and its
// subclasses) -> CLI exit 3, IoError -> CLI exit 1.

#include <stdexcept>
#include <string>

namespace bonuswalk {

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Empirical dispersion at or below pure Poisson: no valid gamma mixture.
class InsufficientDispersion : public NumericError {
public:
    explicit InsufficientDispersion(const std::string& msg) : NumericError(msg) {}
};

// Zero claims in the whole record set.
class EmptyData : public NumericError {
public:
    explicit EmptyData(const std::string& msg) : NumericError(msg) {}
};

// Posterior integrals vanish: the conditioning class cannot be reached in
// the given number of steps.
class UnreachableState : public NumericError {
public:
    explicit UnreachableState(const std::string& msg) : NumericError(msg) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace bonuswalk
