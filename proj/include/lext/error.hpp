// SPDX-License-Identifier: MIT
#pragma once

#include <stdexcept>

namespace lext {

/// Base class of every exception thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dimension or size mismatch between operands.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Multi-index component or flat offset outside the valid range.
class IndexError : public Error {
public:
    using Error::Error;
};

/// Invalid argument (bad mode, malformed permutation, empty input, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Requested element count exceeds what the platform can index.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// A covariance factor is not symmetric positive definite.
class DefinitenessError : public Error {
public:
    using Error::Error;
};

/// Malformed tensor file (text or binary).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Unknown identity id requested from the registry.
class LookupError : public Error {
public:
    using Error::Error;
};

}  // namespace lext
