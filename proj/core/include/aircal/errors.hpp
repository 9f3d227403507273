#pragma once

#include <stdexcept>
#include <string>

namespace aircal {

// Every failure the toolkit signals, in one place so the CLI can map each
// one to a machine-readable category.
enum class ErrorCategory {
    ZeroDistance,
    MalformedGrid,
    RaggedRows,
    NonFiniteGain,
    GridMismatch,
    EmptyTrack,
    NonMonotoneTime,
    MalformedRow,
    NonFinitePower,
    NoOverlap,
    EmptyInput,
    DegenerateDesign,
    ConfigError,
    IoError,
};

const char* to_string(ErrorCategory category);

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& message);

    ErrorCategory category() const { return category_; }

private:
    ErrorCategory category_;
};

} // namespace aircal
