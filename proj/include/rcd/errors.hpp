#pragma once

#include <stdexcept>
#include <string>

namespace rcd {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input is syntactically fine but statistically unusable (zero variance,
/// all-equal samples, degenerate kernel bandwidth).
class DegenerateInput : public Error {
public:
    using Error::Error;
};

class UnsupportedSampleSize : public Error {
public:
    using Error::Error;
};

/// Violated precondition on arguments: mismatched lengths, bad config values.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Malformed or unreadable input files.
class InputError : public Error {
public:
    using Error::Error;
};

}  // namespace rcd
