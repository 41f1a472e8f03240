#pragma once

#include <stdexcept>
#include <string>

namespace hybridloc {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotSymmetric : public Error {
 public:
  using Error::Error;
};

class IndefiniteBeyondRepair : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class UnknownAnchor : public Error {
 public:
  using Error::Error;
};

// Innovation covariance too ill-conditioned to invert. Callers keep the
// prediction and skip the update.
class SingularInnovation : public Error {
 public:
  using Error::Error;
};

class UnsortedInput : public Error {
 public:
  using Error::Error;
};

class TimeRegression : public Error {
 public:
  using Error::Error;
};

class InsufficientAnchors : public Error {
 public:
  using Error::Error;
};

class EmptySamples : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

// Malformed measurement-log line; the message carries the line number.
class LogFormatError : public Error {
 public:
  LogFormatError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace hybridloc
