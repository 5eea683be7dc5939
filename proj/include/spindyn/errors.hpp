// errors.hpp - exception hierarchy; category() is what the CLI reports on failure
#pragma once
#include <stdexcept>
#include <string>

namespace spindyn {

class Error : public std::runtime_error {
 public:
  Error(std::string category, const std::string& what)
      : std::runtime_error(what), category_(std::move(category)) {}
  const std::string& category() const noexcept { return category_; }

 private:
  std::string category_;
};

#define SPINDYN_ERROR(Name)                                                   \
  class Name : public Error {                                                 \
   public:                                                                    \
    explicit Name(const std::string& what) : Error(#Name, what) {}            \
  };

SPINDYN_ERROR(NonHermitianState)
SPINDYN_ERROR(OutOfExtent)
SPINDYN_ERROR(QuadratureNotConverged)
SPINDYN_ERROR(SingularVolterraStep)
SPINDYN_ERROR(ConstraintViolation)
SPINDYN_ERROR(InvalidBlochVector)
SPINDYN_ERROR(ReplicaRequired)
SPINDYN_ERROR(NotADensityMatrix)
SPINDYN_ERROR(ClusterTooLarge)
SPINDYN_ERROR(ValidationError)
SPINDYN_ERROR(IoError)

#undef SPINDYN_ERROR

// config errors carry a source position (1-based, 0 when unknown)
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error("ParseError", what + " (line " + std::to_string(line) + ", column " +
                                std::to_string(column) + ")"),
        line_(line), column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_, column_;
};

// a step failure tagged with the time index it happened at
class StepError : public Error {
 public:
  StepError(const Error& cause, std::size_t row)
      : Error(cause.category(), "row " + std::to_string(row) + ": " + cause.what()), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

}  // namespace spindyn
