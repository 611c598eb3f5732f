#include "ionroute/errors.hpp"

namespace ionroute {

namespace {

std::string with_position(const std::string& msg, std::size_t line,
                          std::size_t column) {
  if (line == 0) {
    return msg;
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column) +
         ": " + msg;
}

} // namespace

ParseError::ParseError(const std::string& msg, std::size_t line, std::size_t column)
    : Error(with_position(msg, line, column)), line_(line), column_(column) {}

IllegalMoveError::IllegalMoveError(int constraint, const std::string& msg)
    : Error("constraint " + std::to_string(constraint) + " violated: " + msg),
      constraint_(constraint) {}

ReplayError::ReplayError(std::size_t index, const std::string& msg)
    : Error("instruction " + std::to_string(index) + ": " + msg), index_(index) {}

} // namespace ionroute
