#include "hetseg/error.hpp"

namespace hetseg {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::RankDeficient: return "RankDeficient";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::InsufficientData: return "InsufficientData";
        case ErrorKind::DegenerateSeries: return "DegenerateSeries";
        case ErrorKind::BandwidthTooLarge: return "BandwidthTooLarge";
        case ErrorKind::SingularStandardizer: return "SingularStandardizer";
        case ErrorKind::DomainError: return "DomainError";
        case ErrorKind::NoRoot: return "NoRoot";
        case ErrorKind::NotPSD: return "NotPSD";
        case ErrorKind::SegmentTooShort: return "SegmentTooShort";
        case ErrorKind::InvalidConfig: return "InvalidConfig";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::MissingColumn: return "MissingColumn";
        case ErrorKind::NonNumericCell: return "NonNumericCell";
        case ErrorKind::TooFewRows: return "TooFewRows";
        case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace hetseg
