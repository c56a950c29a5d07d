#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ernn {

// Root of every error the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define ERNN_DEFINE_ERROR(Name)         \
  class Name : public Error {           \
   public:                              \
    using Error::Error;                 \
  }

ERNN_DEFINE_ERROR(NotUnit);
ERNN_DEFINE_ERROR(MissingVariable);
ERNN_DEFINE_ERROR(InvalidSpec);
ERNN_DEFINE_ERROR(InvalidState);
ERNN_DEFINE_ERROR(NoSuchMeasuringLine);
ERNN_DEFINE_ERROR(PlacementFailure);
ERNN_DEFINE_ERROR(RealizationFailure);
ERNN_DEFINE_ERROR(UnsatisfiedAssignment);
ERNN_DEFINE_ERROR(DepthUnderflow);
ERNN_DEFINE_ERROR(NotFitting);
ERNN_DEFINE_ERROR(DimensionMismatch);
ERNN_DEFINE_ERROR(FormatError);

#undef ERNN_DEFINE_ERROR

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column, const std::string& message)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column),
        message_(message) {}

  [[nodiscard]] std::size_t line() const { return line_; }
  [[nodiscard]] std::size_t column() const { return column_; }
  [[nodiscard]] const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

}  // namespace ernn
