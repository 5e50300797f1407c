#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hetseg/procedure.hpp"
#include "hetseg/regression.hpp"
#include "hetseg/segmentation.hpp"

namespace hetseg::io {

inline constexpr const char* kReportSchema = "hetseg-report/1";

struct CsvSelection {
    std::string response;
    /// Empty selects every column other than the response.
    std::vector<std::string> covariates;
    bool intercept = true;
};

/// Comma-separated input with a header row. Rows keep their file order.
/// Errors: ParseError (ragged row, bad quoting), MissingColumn,
/// NonNumericCell (with 1-based data row and column name), TooFewRows.
[[nodiscard]] Dataset read_csv(std::istream& in, const CsvSelection& selection);
[[nodiscard]] Dataset read_csv(const std::filesystem::path& path, const CsvSelection& selection);

/// Reports as "hetseg-report/1" JSON text; doubles rounded to 12 significant
/// digits, non-finite values written as null.
[[nodiscard]] std::string report_json(const TestReport& report);
[[nodiscard]] std::string report_json(const SegmentationResult& result);

/// Writes the JSON text plus a trailing newline; IoError on failure.
void write_report(const TestReport& report, const std::filesystem::path& path);
void write_report(const SegmentationResult& result, const std::filesystem::path& path);

/// CSV with columns k, t, z_1..z_d, standardized_stat; one row per k = 0..N,
/// standardized_stat left empty where the profile has no value.
void emit_cusum_table(const CusumPath& path, const std::vector<std::optional<double>>& profile, std::ostream& out);
void emit_cusum_table(const CusumPath& path, const std::vector<std::optional<double>>& profile,
                      const std::filesystem::path& out);

/// Value rounded to 12 significant digits, as stored in reports.
[[nodiscard]] double round12(double v);

}  // namespace hetseg::io
