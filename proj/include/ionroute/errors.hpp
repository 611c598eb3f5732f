#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ionroute {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// QASM, trace, or JSON input that does not parse. Carries 1-based line and
/// column when known (0 otherwise).
class ParseError : public Error {
public:
  ParseError(const std::string& msg, std::size_t line = 0,
             std::size_t column = 0);

  [[nodiscard]] std::size_t line() const noexcept { return line_; }
  [[nodiscard]] std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

class ArchitectureError : public Error {
public:
  using Error::Error;
};

/// More qubits than trap slots, or a block wider than every executable trap.
class CapacityError : public Error {
public:
  using Error::Error;
};

/// Router gave up: the move cap tripped or no gathering plan exists.
class RoutingError : public Error {
public:
  using Error::Error;
};

/// A shuttle that violates one of the numbered QCCD constraints (1..8).
class IllegalMoveError : public Error {
public:
  IllegalMoveError(int constraint, const std::string& msg);

  [[nodiscard]] int constraint() const noexcept { return constraint_; }

private:
  int constraint_;
};

/// Instruction list does not replay from the given initial assignment.
class ReplayError : public Error {
public:
  ReplayError(std::size_t index, const std::string& msg);

  [[nodiscard]] std::size_t index() const noexcept { return index_; }

private:
  std::size_t index_;
};

} // namespace ionroute
