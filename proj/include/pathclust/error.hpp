#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pathclust {

enum class Errc {
    EmptyDataset,
    NonFiniteValue,
    LabelArityMismatch,
    InvalidPath,
    SnapshotNotPrefix,
    WindowExceedsPath,
    DimensionMismatch,
    PathTooShort,
    InvalidConfig,
    KappaOutOfRange,
    MalformedMatrix,
    ArityMismatch,
    InvalidSpec,
    NotPositiveDefinite,
    EmbeddingNotNonnegative,
    InvalidManifest,
    ParseError,
    IoError,
};

std::string_view errc_name(Errc code) noexcept;

/// Errors raised by the library. The code identifies the failed contract,
/// the message carries context (path id, field name, pair indices).
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

    /// True for errors caused by invalid user input rather than IO or
    /// numerical breakdown.
    bool is_input_error() const noexcept;

private:
    Errc code_;
};

}  // namespace pathclust
