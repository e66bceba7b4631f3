#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace driftlag {

enum class ErrorCode {
    MalformedHeader,
    NonNumericCell,
    NonContiguousDates,
    TooShort,
    UnknownKind,
    DuplicateEvent,
    BadDate,
    MissingColumn,
    OutOfRange,
    NoInterventions,
    InsufficientData,
    NonFinite,
    InvalidArgument,
    Misaligned,
    NoDrift,
    ThresholdNotReached,
    EmptyInput,
    MissingMetadata,
    LengthMismatch,
    RaggedInput,
    Io,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this exception; the code is what
// callers (and the batch runner's exclusion list) dispatch on.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

}  // namespace driftlag
