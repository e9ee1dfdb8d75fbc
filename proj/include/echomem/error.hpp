#pragma once

#include <stdexcept>
#include <string>

namespace echomem {

/// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad inputs or broken preconditions: dimension mismatches, invalid
/// configurations, impossible requests.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Filesystem trouble: missing files, unreadable paths, failed writes.
class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed payloads: broken WAV headers, corrupt model files, bad CSV.
class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace echomem
