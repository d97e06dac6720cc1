#pragma once

#include <stdexcept>

namespace finrag {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid input, violated invariant, or malformed data.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Filesystem failures and unreadable/unsupported on-disk formats.
class IoError : public Error {
public:
    using Error::Error;
};

// Remote provider failed (timeout or non-success) with retries exhausted.
class ProviderError : public Error {
public:
    using Error::Error;
};

// Provider answered, but the payload does not match the wire contract.
class ProtocolError : public Error {
public:
    using Error::Error;
};

}  // namespace finrag
