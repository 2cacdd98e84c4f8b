#pragma once

#include <stdexcept>
#include <string>

namespace bhset {

enum class ErrorCode {
  InvalidArgument = 1,
  Domain,
  Overflow,
  Contract,
  Io,
  Invariant,
  Divergent,
  Internal,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const char* message) {
  if (!condition) fail(code, message);
}

}  // namespace bhset
