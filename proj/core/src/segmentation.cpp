#include "hetseg/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hetseg/error.hpp"

namespace hetseg {

std::size_t default_min_segment(std::size_t d) noexcept { return std::max<std::size_t>(20, 5 * d); }

std::size_t default_max_depth(std::size_t n, std::size_t min_segment) noexcept {
    if (min_segment == 0 || n <= min_segment) return 0;
    return static_cast<std::size_t>(std::floor(std::log2(static_cast<double>(n) / static_cast<double>(min_segment))));
}

std::size_t estimate_changepoint(const Dataset& data, std::size_t start, std::size_t end, const TestConfig& config,
                                 std::size_t min_segment) {
    if (start < 1 || end > data.n() || start > end) {
        throw Error(ErrorKind::DimensionMismatch, "segment bounds outside the sample");
    }
    const std::size_t length = end - start + 1;
    if (length < 2 * min_segment) {
        throw Error(ErrorKind::SegmentTooShort, "segment of length " + std::to_string(length) +
                                                    " is shorter than 2 * min_segment");
    }
    const TestReport report = run_test(data.slice(start - 1, length), config);
    return start - 1 + report.argmax_index;
}

namespace {

struct Recursion {
    const Dataset& data;
    const SegmentationConfig& config;
    std::size_t min_segment;
    std::size_t max_depth;
    SegmentationResult& result;

    void visit(std::size_t start, std::size_t end, std::size_t depth) {
        const std::size_t length = end - start + 1;
        if (length < 2 * min_segment) return;

        TestConfig test = config.test;
        if (config.bonferroni) test.alpha /= std::ldexp(1.0, static_cast<int>(depth));

        TestReport report;
        try {
            report = run_test(data.slice(start - 1, length), test);
        } catch (const Error& e) {
            result.warnings.push_back("segment [" + std::to_string(start) + ", " + std::to_string(end) +
                                      "] skipped: " + e.what());
            return;
        }
        result.reports.push_back({start, end, depth, report});
        if (!report.reject) return;

        const std::size_t left = report.argmax_index;
        if (left < min_segment || length - left < min_segment) {
            result.warnings.push_back("segment [" + std::to_string(start) + ", " + std::to_string(end) +
                                      "] rejected but the argmax " + std::to_string(start - 1 + left) +
                                      " leaves a piece shorter than min_segment; not split");
            return;
        }
        const std::size_t split = start - 1 + left;
        result.change_points.push_back(split);
        if (depth >= max_depth) return;
        visit(start, split, depth + 1);
        visit(split + 1, end, depth + 1);
    }
};

}  // namespace

SegmentationResult binary_segment(const Dataset& data, const SegmentationConfig& config) {
    config.test.validate();
    SegmentationResult result;
    result.config = config;
    const std::size_t min_segment = config.min_segment.value_or(default_min_segment(data.d()));
    if (min_segment < trim_min(data.d()) + 1) {
        throw Error(ErrorKind::InvalidConfig, "min_segment too small for the trimmed grid");
    }
    const std::size_t max_depth = config.max_depth.value_or(default_max_depth(data.n(), min_segment));
    result.config.min_segment = min_segment;
    result.config.max_depth = max_depth;
    if (data.n() < 2 * min_segment) {
        throw Error(ErrorKind::SegmentTooShort, "sample shorter than 2 * min_segment");
    }

    Recursion{data, config, min_segment, max_depth, result}.visit(1, data.n(), 0);
    std::sort(result.change_points.begin(), result.change_points.end());

    std::size_t start = 1;
    auto bounds = result.change_points;
    bounds.push_back(data.n());
    for (const std::size_t end : bounds) {
        Segment seg{start, end, Vector(), std::numeric_limits<double>::quiet_NaN()};
        try {
            const RegressionFit fit = fit_ols(data.slice(start - 1, end - start + 1));
            seg.beta = fit.beta_hat;
            seg.resid_sd = fit.scale;
        } catch (const Error& e) {
            result.warnings.push_back("refit of segment [" + std::to_string(start) + ", " + std::to_string(end) +
                                      "] failed: " + e.what());
        }
        result.segments.push_back(std::move(seg));
        start = end + 1;
    }
    return result;
}

}  // namespace hetseg
