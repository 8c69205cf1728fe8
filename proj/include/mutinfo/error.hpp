#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mutinfo {

enum class ErrorCode {
  not_hermitian,
  not_unit_trace,
  not_positive,
  dimension_mismatch,
  length_mismatch,
  invalid_distribution,
  not_trace_preserving,
  decomposition_mismatch,
  marginal_mismatch,
  basis_not_orthonormal,
  alphabet_mismatch,
  invalid_symbol,
  degenerate_entropy,
  missing_distance,
  invalid_base,
  uncorrectable_block,
  missing_codon,
  invalid_code,
  invalid_argument,
  parse_error,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::not_hermitian: return "NotHermitian";
    case ErrorCode::not_unit_trace: return "NotUnitTrace";
    case ErrorCode::not_positive: return "NotPositive";
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::length_mismatch: return "LengthMismatch";
    case ErrorCode::invalid_distribution: return "InvalidDistribution";
    case ErrorCode::not_trace_preserving: return "NotTracePreserving";
    case ErrorCode::decomposition_mismatch: return "DecompositionMismatch";
    case ErrorCode::marginal_mismatch: return "MarginalMismatch";
    case ErrorCode::basis_not_orthonormal: return "BasisNotOrthonormal";
    case ErrorCode::alphabet_mismatch: return "AlphabetMismatch";
    case ErrorCode::invalid_symbol: return "InvalidSymbol";
    case ErrorCode::degenerate_entropy: return "DegenerateEntropy";
    case ErrorCode::missing_distance: return "MissingDistance";
    case ErrorCode::invalid_base: return "InvalidBase";
    case ErrorCode::uncorrectable_block: return "UncorrectableBlock";
    case ErrorCode::missing_codon: return "MissingCodon";
    case ErrorCode::invalid_code: return "InvalidCode";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::parse_error: return "ParseError";
  }
  return "Unknown";
}

/// Every failure in the library surfaces as this exception; `code()` is stable
/// and machine readable, `what()` carries the measured detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return to_string(code_); }

 private:
  ErrorCode code_;
};

}  // namespace mutinfo
