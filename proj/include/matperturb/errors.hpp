#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace matperturb {

/// Failure categories; the CLI maps them onto exit codes 1 and 2.
enum class ErrorKind { precondition, numerical };

/// Base error carrying a short machine-readable code ("not_psd", "kernel_present", ...)
/// next to the human-readable message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message)
      : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

class PreconditionError : public Error {
 public:
  PreconditionError(std::string code, const std::string& message)
      : Error(ErrorKind::precondition, std::move(code), message) {}
};

class NumericalError : public Error {
 public:
  NumericalError(std::string code, const std::string& message)
      : Error(ErrorKind::numerical, std::move(code), message) {}
};

}  // namespace matperturb
