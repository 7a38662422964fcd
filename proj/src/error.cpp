#include "pathclust/error.hpp"

namespace pathclust {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::EmptyDataset: return "EmptyDataset";
        case Errc::NonFiniteValue: return "NonFiniteValue";
        case Errc::LabelArityMismatch: return "LabelArityMismatch";
        case Errc::InvalidPath: return "InvalidPath";
        case Errc::SnapshotNotPrefix: return "SnapshotNotPrefix";
        case Errc::WindowExceedsPath: return "WindowExceedsPath";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::PathTooShort: return "PathTooShort";
        case Errc::InvalidConfig: return "InvalidConfig";
        case Errc::KappaOutOfRange: return "KappaOutOfRange";
        case Errc::MalformedMatrix: return "MalformedMatrix";
        case Errc::ArityMismatch: return "ArityMismatch";
        case Errc::InvalidSpec: return "InvalidSpec";
        case Errc::NotPositiveDefinite: return "NotPositiveDefinite";
        case Errc::EmbeddingNotNonnegative: return "EmbeddingNotNonnegative";
        case Errc::InvalidManifest: return "InvalidManifest";
        case Errc::ParseError: return "ParseError";
        case Errc::IoError: return "IoError";
    }
    return "Unknown";
}

bool Error::is_input_error() const noexcept {
    switch (code_) {
        case Errc::IoError:
        case Errc::NotPositiveDefinite:
        case Errc::EmbeddingNotNonnegative:
            return false;
        default:
            return true;
    }
}

}  // namespace pathclust
