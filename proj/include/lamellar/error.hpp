#pragma once

#include <stdexcept>
#include <string>

namespace lamellar {

// Numeric values are mirrored by lam_status in lamellar.h.
enum class ErrorCode {
  kDomain = 1,
  kSingularity = 2,
  kRange = 3,
  kOrdering = 4,
  kDetection = 5,
  kNotCritical = 6,
  kNoBracket = 7,
  kStepFailure = 8,
  kLineSearch = 9,
  kIo = 10,
  kInvalidArgument = 11,
};

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

}  // namespace lamellar
