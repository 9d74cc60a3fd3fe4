#ifndef CRWB_ERRORS_HPP
#define CRWB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace crwb {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Arithmetic on opposite/equal infinities where the result is undefined
/// (e.g. (-inf) + (+inf), (-inf) - (-inf)).
struct IndeterminateForm : Error {
    using Error::Error;
};

/// Elementwise operation on fields of different length.
struct LengthMismatch : Error {
    using Error::Error;
};

/// A value that must be strictly positive is zero or negative.
struct NonPositiveValue : Error {
    using Error::Error;
};

struct DivisionByZero : Error {
    using Error::Error;
};

/// Input outside its admissible range (carries the offending site in the message).
struct OutOfRange : Error {
    using Error::Error;
};

/// Field entry expected to be exactly 0 or 1.
struct NonBinary : Error {
    using Error::Error;
};

/// R-elimination requested with R = -inf.
struct RNotFinite : Error {
    using Error::Error;
};

/// A state violating a proved bound was produced; always an implementation fault.
struct InvariantViolation : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

/// Too few data points / bins to form an estimate.
struct InsufficientData : Error {
    using Error::Error;
};

/// An intermediate left the shifted log domain inside the limit verifier.
struct OverflowGuard : Error {
    using Error::Error;
};

}  // namespace crwb

#endif
