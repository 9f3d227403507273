#include "aircal/errors.hpp"

namespace aircal {

const char* to_string(ErrorCategory category) {
    switch (category) {
        case ErrorCategory::ZeroDistance: return "ZeroDistance";
        case ErrorCategory::MalformedGrid: return "MalformedGrid";
        case ErrorCategory::RaggedRows: return "RaggedRows";
        case ErrorCategory::NonFiniteGain: return "NonFiniteGain";
        case ErrorCategory::GridMismatch: return "GridMismatch";
        case ErrorCategory::EmptyTrack: return "EmptyTrack";
        case ErrorCategory::NonMonotoneTime: return "NonMonotoneTime";
        case ErrorCategory::MalformedRow: return "MalformedRow";
        case ErrorCategory::NonFinitePower: return "NonFinitePower";
        case ErrorCategory::NoOverlap: return "NoOverlap";
        case ErrorCategory::EmptyInput: return "EmptyInput";
        case ErrorCategory::DegenerateDesign: return "DegenerateDesign";
        case ErrorCategory::ConfigError: return "ConfigError";
        case ErrorCategory::IoError: return "IoError";
    }
    return "Unknown";
}

Error::Error(ErrorCategory category, const std::string& message)
    : std::runtime_error(std::string(to_string(category)) + ": " + message), category_(category) {}

} // namespace aircal
