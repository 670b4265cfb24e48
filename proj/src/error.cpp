#include "rispaces/error.hpp"

namespace rispaces {

const char* error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::BadWeights: return "BadWeights";
    case ErrorKind::BadModel: return "BadModel";
    case ErrorKind::BadInterval: return "BadInterval";
    case ErrorKind::BadPoint: return "BadPoint";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NonFiniteValue: return "NonFiniteValue";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::BadExponent: return "BadExponent";
    case ErrorKind::ConditionC2Failed: return "ConditionC2Failed";
    case ErrorKind::InfiniteNorm: return "InfiniteNorm";
    case ErrorKind::ConditionCheckFailed: return "ConditionCheckFailed";
    case ErrorKind::HypothesisViolation: return "HypothesisViolation";
    case ErrorKind::Divergent: return "Divergent";
    case ErrorKind::NotMonotone: return "NotMonotone";
    case ErrorKind::BadConfig: return "BadConfig";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace rispaces
