#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace rankone {

enum class ErrorCode {
  InvalidSchedule,
  InvalidParam,
  UnknownFamily,
  OutOfRange,
  WindowOutOfRange,
  NotPrime,
  NotIrreducible,
  NoGenerator,
  SizeBudgetExceeded,
  StageBudgetExceeded,
  ScaleExceeded,
  IllConditioned,
  MissingLags,
  UnboundedMeasure,
  ConfigError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  // Budget errors are recoverable: the caller may report partial output.
  bool is_budget() const noexcept {
    return code_ == ErrorCode::SizeBudgetExceeded || code_ == ErrorCode::StageBudgetExceeded ||
           code_ == ErrorCode::ScaleExceeded;
  }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace rankone
