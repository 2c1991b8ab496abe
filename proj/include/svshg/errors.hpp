#pragma once

#include <exception>
#include <string>
#include <utility>

namespace svshg {

/// Base of every error raised by the library. The message can be prefixed
/// with context (row index, config line) while the exception is in flight.
class Error : public std::exception {
 public:
  explicit Error(std::string message) : message_(std::move(message)) {}

  const char* what() const noexcept override { return message_.c_str(); }

  void prepend(const std::string& context) { message_ = context + ": " + message_; }

 private:
  std::string message_;
};

/// Input outside the mathematical domain of an operation.
class DomainError : public Error {
  using Error::Error;
};

/// Squeeze gain above the double-precision guard.
class OverflowGuardError : public DomainError {
  using DomainError::DomainError;
};

/// A requested value lies outside what the model can reach.
class RangeError : public Error {
  using Error::Error;
};

/// Quadrature refinement moved the answer by more than the tolerance.
class ConvergenceError : public Error {
  using Error::Error;
};

class CalibrationError : public Error {
  using Error::Error;
};

class NotFoundError : public Error {
  using Error::Error;
};

class RankError : public Error {
  using Error::Error;
};

class ModelMismatchError : public Error {
  using Error::Error;
};

class ShapeError : public Error {
  using Error::Error;
};

class IoError : public Error {
  using Error::Error;
};

/// Fock-space truncation too small; carries the smallest adequate cutoff.
class TruncationError : public Error {
 public:
  TruncationError(std::string message, int required_cutoff)
      : Error(std::move(message)), required_cutoff_(required_cutoff) {}

  int required_cutoff() const noexcept { return required_cutoff_; }

 private:
  int required_cutoff_;
};

/// Config text problems. Line 0 means "not tied to a line" (e.g. a missing
/// section or a command-line override).
class ConfigError : public Error {
 public:
  ConfigError(const std::string& message, int line, std::string key)
      : Error(format(message, line, key)), line_(line), key_(std::move(key)) {}

  int line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

 private:
  static std::string format(const std::string& message, int line, const std::string& key) {
    std::string out = "config";
    if (line > 0) out += " line " + std::to_string(line);
    if (!key.empty()) out += " key '" + key + "'";
    return out + ": " + message;
  }

  int line_;
  std::string key_;
};

}  // namespace svshg
