#pragma once

#include <stdexcept>
#include <string>

namespace masc {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A document could not be read or is not well-formed.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A well-formed document violates a schema rule or a domain invariant.
class ValidationError : public Error {
 public:
  ValidationError(std::string subject, std::string message)
      : Error(subject.empty() ? message : subject + ": " + message),
        subject_(std::move(subject)) {}

  /// Offending entity (case id, API name, field path); may be empty.
  const std::string& subject() const {
    return subject_;
  }

 private:
  std::string subject_;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// Glue was requested in a form the API kind does not support.
class IncompatibleFormError : public Error {
 public:
  using Error::Error;
};

/// An operator was applied to a case it cannot instantiate.
class InapplicableOperatorError : public Error {
 public:
  using Error::Error;
};

/// The string-evaluation oracle met an expression outside its fragment.
class UnsupportedExpressionError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// An external command could not be started.
class CommandNotFoundError : public Error {
 public:
  using Error::Error;
};

class TimeoutError : public Error {
 public:
  using Error::Error;
};

} // namespace masc
