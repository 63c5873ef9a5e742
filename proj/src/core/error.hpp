#pragma once

#include <stdexcept>
#include <string>

namespace rachload {

enum class ErrorCode {
  kInvalidArgument,
  kNoFeasibleHypothesis,
  kIo,
  kBudgetExceeded,
};

// All library failures are reported as rachload::Error; the C API maps the
// code onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void throw_invalid(const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, what);
}

}  // namespace rachload
