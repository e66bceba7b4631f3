#include "driftlag/error.hpp"

namespace driftlag {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedHeader: return "MalformedHeader";
        case ErrorCode::NonNumericCell: return "NonNumericCell";
        case ErrorCode::NonContiguousDates: return "NonContiguousDates";
        case ErrorCode::TooShort: return "TooShort";
        case ErrorCode::UnknownKind: return "UnknownKind";
        case ErrorCode::DuplicateEvent: return "DuplicateEvent";
        case ErrorCode::BadDate: return "BadDate";
        case ErrorCode::MissingColumn: return "MissingColumn";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::NoInterventions: return "NoInterventions";
        case ErrorCode::InsufficientData: return "InsufficientData";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::Misaligned: return "Misaligned";
        case ErrorCode::NoDrift: return "NoDrift";
        case ErrorCode::ThresholdNotReached: return "ThresholdNotReached";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::MissingMetadata: return "MissingMetadata";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::RaggedInput: return "RaggedInput";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace driftlag
