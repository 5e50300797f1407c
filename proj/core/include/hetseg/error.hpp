#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hetseg {

enum class ErrorKind {
    RankDeficient,
    DimensionMismatch,
    InsufficientData,
    DegenerateSeries,
    BandwidthTooLarge,
    SingularStandardizer,
    DomainError,
    NoRoot,
    NotPSD,
    SegmentTooShort,
    InvalidConfig,
    ParseError,
    MissingColumn,
    NonNumericCell,
    TooFewRows,
    IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so that
/// callers (the CLI in particular) can map it onto an exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace hetseg
