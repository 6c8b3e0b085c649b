#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mapequiv {

enum class ErrorCode {
  ParseError,
  InvalidField,
  FieldMismatch,
  ZeroInverse,
  Singular,
  NotSquare,
  DimensionMismatch,
  SchemaViolation,
  DuplicateKey,
  KeySetMismatch,
  UnknownKey,
  InvalidBase,
  NotInSpan,
  UnsupportedGroup,
  CustomGroupNeedsFullRank,
  RetriesExhausted,
  TooLarge,
  InternalError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidField: return "InvalidField";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::ZeroInverse: return "ZeroInverse";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::DuplicateKey: return "DuplicateKey";
    case ErrorCode::KeySetMismatch: return "KeySetMismatch";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::InvalidBase: return "InvalidBase";
    case ErrorCode::NotInSpan: return "NotInSpan";
    case ErrorCode::UnsupportedGroup: return "UnsupportedGroup";
    case ErrorCode::CustomGroupNeedsFullRank: return "CustomGroupNeedsFullRank";
    case ErrorCode::RetriesExhausted: return "RetriesExhausted";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::InternalError: return "InternalError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mapequiv
