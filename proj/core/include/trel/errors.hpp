#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace trel {

enum class ErrorKind {
    ShapeMismatch,
    NonFiniteValue,
    InvalidFrameCount,
    ManifestParseError,
    WeightShapeMismatch,
    MissingWeightBlob,
    CyclicGraph,
    IndexOutOfRange,
    UnsupportedRuleForLayer,
    NegativeRelevance,
    NoPositiveLogit,
    DegenerateInput,
    InvalidK,
    RateMismatch,
    EmptyInput,
    WindowOutOfRange,
    InvalidSpec,
    IOFailure,
    UsageError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    // true for errors caused by bad configuration or inputs rather than a
    // failure discovered mid-computation; drives the CLI exit code
    bool is_usage() const noexcept;

private:
    ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

}  // namespace trel
