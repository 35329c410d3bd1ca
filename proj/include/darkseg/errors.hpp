#pragma once

#include <stdexcept>
#include <string>

namespace darkseg {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed file content (PNG, JSON, RLE).
struct DecodeError : Error {
    using Error::Error;
};

/// Two buffers that must share dimensions do not.
struct ShapeMismatchError : Error {
    using Error::Error;
};

/// An operation that requires at least one set pixel got an empty mask.
struct EmptyMaskError : Error {
    using Error::Error;
};

/// Fewer than the minimum number of feature matches survived filtering.
struct InsufficientMatchesError : Error {
    using Error::Error;
};

/// Robust transform estimation could not produce a trustworthy model.
struct AlignmentFailedError : Error {
    using Error::Error;
};

} // namespace darkseg
