#pragma once

#include <stdexcept>
#include <string>

namespace pzk {

enum class Errc {
  NonPrimeLabel,
  AlreadyOpen,
  AlreadyMarked,
  NotSealed,
  ContainsEnvelope,
  NotProver,
  ParseError,
  StructureError,
  ShapeMismatch,
  BudgetExceeded,
  InvalidSolution,
  ConsumedCommitment,
  NoSuchCell,
  OutOfRange,
  InfeasibleCage,
  InvalidArgument,
  ProtocolViolation,
  MalformedFrame,
  SessionFailure,
};

const char* to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& reason)
      : Error(Errc::ParseError, "line " + std::to_string(line) + ", column " +
                                    std::to_string(column) + ": " + reason),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace pzk
