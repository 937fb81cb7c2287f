#pragma once

#include <stdexcept>
#include <string>

namespace egactive {

/// Base of every error raised by the library. `kind()` is a stable short tag
/// used by the CLI diagnostics and by tests.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define EGACTIVE_DEFINE_ERROR(Name, tag)                         \
  class Name : public Error {                                    \
   public:                                                       \
    explicit Name(const std::string& what) : Error(tag, what) {} \
  };

EGACTIVE_DEFINE_ERROR(ValidationError, "validation error")
EGACTIVE_DEFINE_ERROR(ParseError, "parse error")
EGACTIVE_DEFINE_ERROR(SchemaError, "schema error")
EGACTIVE_DEFINE_ERROR(UnknownIdError, "unknown id")
EGACTIVE_DEFINE_ERROR(DuplicateQueryError, "duplicate query")
EGACTIVE_DEFINE_ERROR(BudgetExhaustedError, "budget exhausted")
EGACTIVE_DEFINE_ERROR(EmptyPoolError, "empty pool")
EGACTIVE_DEFINE_ERROR(InsufficientLabelsError, "insufficient labels")
EGACTIVE_DEFINE_ERROR(IncompatibleVectorsError, "incompatible vectors")
EGACTIVE_DEFINE_ERROR(DomainError, "domain error")
EGACTIVE_DEFINE_ERROR(NumericOverflowError, "numeric overflow")
EGACTIVE_DEFINE_ERROR(IoError, "io error")

#undef EGACTIVE_DEFINE_ERROR

}  // namespace egactive
