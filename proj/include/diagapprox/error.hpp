#pragma once

#include <stdexcept>
#include <string>

namespace diagapprox {

enum class ErrorCode {
  invalid_argument = 1,
  not_in_localization,
  cap_violation,
  diagonal_rational,
  exhausted,
  precision,
  io,
};

const char* error_code_name(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so the
// C layer can map it to a status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace diagapprox
