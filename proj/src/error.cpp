#include "memeprobe/error.hpp"

namespace memeprobe {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::MixedDatasets: return "MixedDatasets";
        case ErrorCode::EmptyAfterFiltering: return "EmptyAfterFiltering";
        case ErrorCode::DuplicateRecord: return "DuplicateRecord";
        case ErrorCode::IncompleteGrid: return "IncompleteGrid";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::UnknownModel: return "UnknownModel";
        case ErrorCode::SingleProbeMatrix: return "SingleProbeMatrix";
        case ErrorCode::DegenerateWeights: return "DegenerateWeights";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::SampleTooSmall: return "SampleTooSmall";
        case ErrorCode::KOutOfRange: return "KOutOfRange";
        case ErrorCode::SizeExceedsModels: return "SizeExceedsModels";
        case ErrorCode::NoPairWithinWindow: return "NoPairWithinWindow";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::Parse: return "Parse";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, std::string module, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      module_(std::move(module)) {}

}  // namespace memeprobe
