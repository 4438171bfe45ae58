#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace memeprobe {

enum class ErrorCode {
    EmptyInput,
    MixedDatasets,
    EmptyAfterFiltering,
    DuplicateRecord,
    IncompleteGrid,
    IndexOutOfRange,
    UnknownModel,
    SingleProbeMatrix,
    DegenerateWeights,
    DimensionMismatch,
    SampleTooSmall,
    KOutOfRange,
    SizeExceedsModels,
    NoPairWithinWindow,
    InvalidArgument,
    Parse,
    Io,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every library failure surfaces as this exception. `module()` names the
// component that raised it so front-ends can report where it came from.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string module, const std::string& message);

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    [[nodiscard]] const std::string& module() const noexcept { return module_; }

private:
    ErrorCode code_;
    std::string module_;
};

}  // namespace memeprobe
