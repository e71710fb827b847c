#pragma once

#include <stdexcept>
#include <string>

namespace hbtdit {

/// Invalid physical parameters or an input outside an operation's domain.
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// An input that carries no information (zero norm, empty trace).
class DegenerateInputError : public DomainError {
public:
  using DomainError::DomainError;
};

/// Adaptive quadrature ran out of doublings.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& what, double last_residual)
      : std::runtime_error(what), last_residual_(last_residual) {}

  double last_residual() const noexcept { return last_residual_; }

private:
  double last_residual_;
};

class ParseError : public DomainError {
public:
  ParseError(const std::string& field, const std::string& what)
      : DomainError(field.empty() ? what : field + ": " + what), field_(field) {}

  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace hbtdit
