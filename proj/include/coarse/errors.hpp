#pragma once

#include <stdexcept>
#include <string>

namespace coarse {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An element that is not a valid normal form for its group.
class InvalidElement : public Error {
public:
  using Error::Error;
};

/// Two objects that must live over the same group (or ring) do not.
class GroupMismatch : public Error {
public:
  using Error::Error;
};

/// A configured enumeration, radius or size cap was exceeded.
class ResourceLimit : public Error {
public:
  using Error::Error;
};

/// A documented precondition does not hold (carries the witness in the message).
class PreconditionFailed : public Error {
public:
  using Error::Error;
};

/// Malformed input: JSON schema violations, unknown names, bad parameters.
class ConfigError : public Error {
public:
  using Error::Error;
};

} // namespace coarse
