#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "hetseg/lrv.hpp"
#include "hetseg/regression.hpp"
#include "hetseg/statistics.hpp"

namespace hetseg {

/// V: Euclidean norm, Q: maximum norm. HET standardizes with G~_N(t) when
/// kappa = 1/2 and leaves Z_N raw otherwise; HO standardizes with D_N.
enum class StatisticKind { V_HET, Q_HET, V_HO, Q_HO };
enum class CvSource { Vostrikova, DarlingErdos, KLSimulated };

[[nodiscard]] std::string_view to_string(StatisticKind kind) noexcept;
[[nodiscard]] std::string_view to_string(CvSource source) noexcept;
[[nodiscard]] Norm norm_of(StatisticKind kind) noexcept;
[[nodiscard]] bool is_heteroscedastic(StatisticKind kind) noexcept;

struct KlSettings {
    std::size_t grid = 512;
    std::size_t truncation = 5;
    std::size_t reps = 5000;
    std::uint64_t seed = 0;
};

struct TestConfig {
    StatisticKind statistic = StatisticKind::V_HET;
    double kappa = 0.5;
    double alpha = 0.05;
    KernelSpec kernel{};
    /// Vostrikova or DarlingErdos for kappa = 1/2, KLSimulated for kappa < 1/2.
    CvSource cv_source = CvSource::Vostrikova;
    KlSettings kl{};
    CriticalOptions critical{};

    void validate() const;
};

struct TestReport {
    double statistic = 0.0;
    std::size_t argmax_index = 0;
    double argmax_t = 0.0;  ///< argmax_index / (N + 1)
    double critical_value = 0.0;
    double alpha = 0.0;
    bool reject = false;    ///< statistic > critical_value
    StatisticKind statistic_kind = StatisticKind::V_HET;
    double kappa = 0.5;
    CvSource cv_source = CvSource::Vostrikova;
    double bandwidth = 0.0;
    std::size_t n = 0;
    std::size_t d = 0;
    double p_value = 1.0;   ///< approximate, from the critical-value source
};

struct TestDetail {
    TestReport report;
    CusumPath path;
    /// Standardized, weighted CUSUM norm per grid index; empty outside the admissible grid.
    std::vector<std::optional<double>> profile;
};

[[nodiscard]] TestDetail run_test_detailed(const Dataset& data, const TestConfig& config);
[[nodiscard]] TestReport run_test(const Dataset& data, const TestConfig& config);

}  // namespace hetseg
