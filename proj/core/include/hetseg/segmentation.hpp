#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hetseg/procedure.hpp"
#include "hetseg/regression.hpp"

namespace hetseg {

struct SegmentationConfig {
    TestConfig test{};
    /// Defaults to max(20, 5 d).
    std::optional<std::size_t> min_segment;
    /// Root test has depth 0. Defaults to floor(log2(N / min_segment)).
    std::optional<std::size_t> max_depth;
    /// Test at depth j uses alpha / 2^j instead of alpha.
    bool bonferroni = false;
};

[[nodiscard]] std::size_t default_min_segment(std::size_t d) noexcept;
[[nodiscard]] std::size_t default_max_depth(std::size_t n, std::size_t min_segment) noexcept;

/// Observations start..end (1-based, inclusive) and their refitted coefficients.
struct Segment {
    std::size_t start = 0;
    std::size_t end = 0;
    Vector beta;               ///< empty when the refit failed (see warnings)
    double resid_sd = 0.0;     ///< NaN when the refit failed
};

struct SegmentTest {
    std::size_t start = 0;
    std::size_t end = 0;
    std::size_t depth = 0;
    TestReport report;
};

struct SegmentationResult {
    /// Global indices k: observation k is the last one of the earlier regime.
    std::vector<std::size_t> change_points;
    std::vector<Segment> segments;
    std::vector<SegmentTest> reports;
    std::vector<std::string> warnings;
    SegmentationConfig config;  ///< with min_segment and max_depth resolved
};

/// Runs the test on observations start..end (1-based, inclusive) and maps the
/// argmax of the normalized CUSUM to a global index. Throws SegmentTooShort
/// when the segment is shorter than 2 * min_segment.
[[nodiscard]] std::size_t estimate_changepoint(const Dataset& data, std::size_t start, std::size_t end,
                                               const TestConfig& config, std::size_t min_segment);

/// Binary segmentation: test, split at the argmax on rejection, recurse on
/// both halves with all estimators recomputed; finally refit each segment.
[[nodiscard]] SegmentationResult binary_segment(const Dataset& data, const SegmentationConfig& config);

}  // namespace hetseg
