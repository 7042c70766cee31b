#ifndef GEOSEP_ERROR_HPP
#define GEOSEP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace geosep {

/// Base class for every exception thrown by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition (bad dimension, negative radius,
/// mixed kinds, infeasible generator parameters, ...).
class ValidationError : public Error
{
public:
    using Error::Error;
};

/// Malformed instance or result file.
class ParseError : public Error
{
public:
    using Error::Error;
};

/// A claim that must hold by construction was violated. Indicates a bug or a
/// mis-derived constant, never bad luck.
class InternalError : public Error
{
public:
    using Error::Error;
};

} // namespace geosep

#endif // GEOSEP_ERROR_HPP
