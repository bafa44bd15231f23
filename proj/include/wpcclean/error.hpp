#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wpcclean {

enum class ErrorCode {
  MissingColumn,
  NonNumericField,
  EmptyDataset,
  UnlabeledPoint,
  InvalidSpec,
  DegenerateRange,
  UnsupportedFormat,
  InvalidSize,
  EmptyImage,
  BadOrder,
  OutOfCanvas,
  AllEmpty,
  InconsistentInputs,
  TooFewPoints,
  InvalidFractions,
  LengthMismatch,
  InvalidConfig,
  Io,
};

constexpr const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::NonNumericField: return "NonNumericField";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::UnlabeledPoint: return "UnlabeledPoint";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::DegenerateRange: return "DegenerateRange";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::InvalidSize: return "InvalidSize";
    case ErrorCode::EmptyImage: return "EmptyImage";
    case ErrorCode::BadOrder: return "BadOrder";
    case ErrorCode::OutOfCanvas: return "OutOfCanvas";
    case ErrorCode::AllEmpty: return "AllEmpty";
    case ErrorCode::InconsistentInputs: return "InconsistentInputs";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::InvalidFractions: return "InvalidFractions";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

// Every failure raised by the library. `row()` is the 1-based data row for
// NonNumericField and 0 otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, std::size_t row = 0)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        row_(row) {}

  ErrorCode code() const noexcept { return code_; }
  std::size_t row() const noexcept { return row_; }

 private:
  ErrorCode code_;
  std::size_t row_;
};

}  // namespace wpcclean
