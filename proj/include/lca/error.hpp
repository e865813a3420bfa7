/**
 * @brief Error type shared by every lca module.
 */
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lca {

enum class ErrorCode {
  InvalidSpectrum,
  ClusterOverlap,
  PerturbationTooLarge,
  MarginMismatch,
  InvalidPermutation,
  EnumerationBudgetExceeded,
  BruteForceCapExceeded,
  InternalInvariantViolation,
  DimensionMismatch,
  NotHermitian,
  NotUnitary,
  EigenNoConvergence,
  InvalidArgument,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSpectrum: return "InvalidSpectrum";
    case ErrorCode::ClusterOverlap: return "ClusterOverlap";
    case ErrorCode::PerturbationTooLarge: return "PerturbationTooLarge";
    case ErrorCode::MarginMismatch: return "MarginMismatch";
    case ErrorCode::InvalidPermutation: return "InvalidPermutation";
    case ErrorCode::EnumerationBudgetExceeded: return "EnumerationBudgetExceeded";
    case ErrorCode::BruteForceCapExceeded: return "BruteForceCapExceeded";
    case ErrorCode::InternalInvariantViolation: return "InternalInvariantViolation";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::EigenNoConvergence: return "EigenNoConvergence";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Thrown for every contract violation. The message names the violated invariant.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lca
