#pragma once

#include <stdexcept>
#include <string>

namespace rispaces {

enum class ErrorKind {
  NonFiniteInput,
  BadWeights,
  BadModel,
  BadInterval,
  BadPoint,
  NoConvergence,
  NonFiniteValue,
  OutOfRange,
  BadExponent,
  ConditionC2Failed,
  InfiniteNorm,
  ConditionCheckFailed,
  HypothesisViolation,
  Divergent,
  NotMonotone,
  BadConfig
};

const char* error_name(ErrorKind kind);

// Single exception type for the whole library; the kind tells callers
// (mainly the CLI) whether a failure is numerical or a configuration issue.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace rispaces
