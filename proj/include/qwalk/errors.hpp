#pragma once

#include <stdexcept>
#include <string>

namespace qwalk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent configuration (bad ratchet, cutoff too small, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A valid configuration was handed to a route that cannot treat it,
/// e.g. a nonzero quasimomentum passed to the resonant closed form.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Probability left the truncated momentum grid.
class TruncationError : public Error {
public:
    using Error::Error;
};

/// Special-function argument outside the supported range.
class RangeError : public Error {
public:
    using Error::Error;
};

}  // namespace qwalk
