#pragma once

#include <stdexcept>
#include <string>

namespace psx {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Mismatched shapes or lengths between operands.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An operand is too small (or too large) for the requested operation.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// An argument is outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// File contents are not in a supported format.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Normal equations are singular (only possible with a zero ridge penalty).
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// A requested key (e.g. class id) is not present.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Two explanations cannot be compared (different class sets).
class ComparabilityError : public Error {
 public:
  using Error::Error;
};

/// Network-level failure talking to an external model server.
class TransportError : public Error {
 public:
  using Error::Error;
};

/// The model server answered, but not with a valid response.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// A black-box model query failed while building a neighbourhood.
class ModelError : public Error {
 public:
  using Error::Error;
};

}  // namespace psx
