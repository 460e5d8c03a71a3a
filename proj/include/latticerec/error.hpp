#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace latticerec {

enum class ErrorKind {
  kDimensionMismatch,
  kAxisOutOfRange,
  kOverflow,
  kNotComparable,
  kCapExceeded,
  kOutOfDomain,
  kInvalidArgument,
  kNotBijective,
  kNotSurjective,
  kIncompatible,
  kUndecidable,
  kSingular,
  kNonCommuting,
  kTimeOutsideDomain,
  kInfiniteSearch,
  kTimeComponentMismatch,
  kParse,
  kConfig,
  kUsage,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace latticerec
