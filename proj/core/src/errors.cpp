#include "trel/errors.hpp"

namespace trel {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ShapeMismatch: return "ShapeMismatch";
        case ErrorKind::NonFiniteValue: return "NonFiniteValue";
        case ErrorKind::InvalidFrameCount: return "InvalidFrameCount";
        case ErrorKind::ManifestParseError: return "ManifestParseError";
        case ErrorKind::WeightShapeMismatch: return "WeightShapeMismatch";
        case ErrorKind::MissingWeightBlob: return "MissingWeightBlob";
        case ErrorKind::CyclicGraph: return "CyclicGraph";
        case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorKind::UnsupportedRuleForLayer: return "UnsupportedRuleForLayer";
        case ErrorKind::NegativeRelevance: return "NegativeRelevance";
        case ErrorKind::NoPositiveLogit: return "NoPositiveLogit";
        case ErrorKind::DegenerateInput: return "DegenerateInput";
        case ErrorKind::InvalidK: return "InvalidK";
        case ErrorKind::RateMismatch: return "RateMismatch";
        case ErrorKind::EmptyInput: return "EmptyInput";
        case ErrorKind::WindowOutOfRange: return "WindowOutOfRange";
        case ErrorKind::InvalidSpec: return "InvalidSpec";
        case ErrorKind::IOFailure: return "IOFailure";
        case ErrorKind::UsageError: return "UsageError";
    }
    return "UnknownError";
}

bool Error::is_usage() const noexcept {
    switch (kind_) {
        case ErrorKind::ManifestParseError:
        case ErrorKind::MissingWeightBlob:
        case ErrorKind::CyclicGraph:
        case ErrorKind::WeightShapeMismatch:
        case ErrorKind::InvalidSpec:
        case ErrorKind::InvalidFrameCount:
        case ErrorKind::InvalidK:
        case ErrorKind::UsageError:
            return true;
        default:
            return false;
    }
}

}  // namespace trel
