#pragma once

#include <stdexcept>
#include <string>

namespace qpsh {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class SizeMismatch : public Error {
public:
    using Error::Error;
};

class NotHyperhermitian : public Error {
public:
    using Error::Error;
};

/// Eigenvalues of the complex adjoint did not pair up; the input was not
/// hyperhermitian to working precision.
class PairingFailure : public Error {
public:
    using Error::Error;
};

class NumericalDegeneracy : public Error {
public:
    using Error::Error;
};

class PreconditionFailure : public Error {
public:
    using Error::Error;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

}  // namespace qpsh
