#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sasbp {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A model invariant does not hold (unknown variable, non-total state, ...).
class ModelError : public Error {
 public:
  using Error::Error;
};

class PreconditionViolated : public Error {
 public:
  PreconditionViolated(std::string action, std::size_t variable, std::string variable_name)
      : Error("action '" + action + "' is not valid: precondition on '" + variable_name +
              "' does not hold"),
        action_(std::move(action)),
        variable_(variable),
        variable_name_(std::move(variable_name)) {}

  const std::string& action() const { return action_; }
  std::size_t variable() const { return variable_; }
  const std::string& variable_name() const { return variable_name_; }

 private:
  std::string action_;
  std::size_t variable_;
  std::string variable_name_;
};

// A search gave up. Never to be confused with a NO answer.
class ResourceLimitExceeded : public Error {
 public:
  using Error::Error;
};

// The instance falls outside the syntactic fragment an algorithm accepts.
class ProfileViolation : public Error {
 public:
  using Error::Error;
};

class OutsideClassifiedRange : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace sasbp
