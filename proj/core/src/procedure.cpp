#include "hetseg/procedure.hpp"

#include <algorithm>

#include "hetseg/error.hpp"
#include "hetseg/limit.hpp"

namespace hetseg {

std::string_view to_string(StatisticKind kind) noexcept {
    switch (kind) {
        case StatisticKind::V_HET: return "V_HET";
        case StatisticKind::Q_HET: return "Q_HET";
        case StatisticKind::V_HO: return "V_HO";
        case StatisticKind::Q_HO: return "Q_HO";
    }
    return "unknown";
}

std::string_view to_string(CvSource source) noexcept {
    switch (source) {
        case CvSource::Vostrikova: return "Vostrikova";
        case CvSource::DarlingErdos: return "DarlingErdos";
        case CvSource::KLSimulated: return "KLSimulated";
    }
    return "unknown";
}

Norm norm_of(StatisticKind kind) noexcept {
    return kind == StatisticKind::V_HET || kind == StatisticKind::V_HO ? Norm::Euclidean : Norm::Max;
}

bool is_heteroscedastic(StatisticKind kind) noexcept {
    return kind == StatisticKind::V_HET || kind == StatisticKind::Q_HET;
}

void TestConfig::validate() const {
    WeightSpec{kappa}.validate();
    if (!(alpha > 0.0 && alpha <= 0.5)) throw Error(ErrorKind::InvalidConfig, "alpha must lie in (0, 0.5]");
    const bool standardized = kappa == 0.5;
    if (standardized && cv_source == CvSource::KLSimulated) {
        throw Error(ErrorKind::InvalidConfig, "kappa = 1/2 uses Vostrikova or Darling-Erdos critical values");
    }
    if (!standardized && cv_source != CvSource::KLSimulated) {
        throw Error(ErrorKind::InvalidConfig, "kappa < 1/2 needs simulated (Karhunen-Loeve) critical values");
    }
    if (kernel.bandwidth && !(*kernel.bandwidth > 0.0)) {
        throw Error(ErrorKind::InvalidConfig, "bandwidth must be positive");
    }
}

namespace {

CriticalMethod critical_method(StatisticKind kind, CvSource source) {
    const bool euclid = norm_of(kind) == Norm::Euclidean;
    if (source == CvSource::Vostrikova) return euclid ? CriticalMethod::VostrikovaV : CriticalMethod::VostrikovaQ;
    return euclid ? CriticalMethod::DarlingErdosV : CriticalMethod::DarlingErdosQ;
}

}  // namespace

namespace {

TestDetail run_impl(const Dataset& data, const TestConfig& config, bool want_profile) {
    config.validate();
    const RegressionFit fit = fit_ols(data);
    CusumPath path = cusum_path(data, fit);
    const Matrix series = weighted_residuals(data, fit);
    LrvPath lrv = lrv_path(series, config.kernel);

    const WeightSpec weight{config.kappa};
    const Norm norm = norm_of(config.statistic);
    const bool het = is_heteroscedastic(config.statistic);

    Standardizer standardizer = Standardizer::identity(data.d());
    if (het && weight.standardized()) {
        lrv = plugin_g_tilde(std::move(lrv));
        standardizer = Standardizer::path(lrv.g_tilde);
    } else if (!het) {
        standardizer = Standardizer::constant(lrv.d_full);
    }

    const SupResult sup = weighted_sup(path, weight, standardizer, norm);

    TestReport report;
    report.statistic = sup.statistic;
    report.argmax_index = sup.argmax_index;
    report.argmax_t = path.t(sup.argmax_index);
    report.alpha = config.alpha;
    report.statistic_kind = config.statistic;
    report.kappa = config.kappa;
    report.cv_source = config.cv_source;
    report.bandwidth = lrv.h_used;
    report.n = data.n();
    report.d = data.d();

    if (weight.standardized()) {
        const CriticalMethod method = critical_method(config.statistic, config.cv_source);
        report.critical_value = critical_value(config.alpha, data.n(), data.d(), method, config.critical);
        report.p_value = approximate_p_value(sup.statistic, data.n(), data.d(), method, config.critical);
    } else {
        if (het) lrv.u = design_cusum_u(data, fit);
        const CovarianceKernel kernel = het ? build_bar_g_kernel(lrv) : brownian_bridge_kernel(data.d());
        const Vector grid = midpoint_grid(config.kl.grid);
        const std::size_t truncation = std::min(config.kl.truncation, config.kl.grid * data.d());
        const KLBasis basis = kl_decompose(kernel, grid, truncation);
        if (config.kl.reps < 1000) throw Error(ErrorKind::InvalidConfig, "KL simulation needs reps >= 1000");
        const auto sample = simulate_weighted_limit_sample(basis, weight, norm, config.kl.reps, config.kl.seed);
        report.critical_value = empirical_quantile(sample, 1.0 - config.alpha);
        const auto above = std::count_if(sample.begin(), sample.end(), [&](double v) { return v >= sup.statistic; });
        report.p_value = static_cast<double>(above) / static_cast<double>(sample.size());
    }
    report.reject = report.statistic > report.critical_value;

    std::vector<std::optional<double>> profile;
    if (want_profile) profile = weighted_profile(path, weight, standardizer, norm);
    return TestDetail{report, std::move(path), std::move(profile)};
}

}  // namespace

TestDetail run_test_detailed(const Dataset& data, const TestConfig& config) {
    return run_impl(data, config, true);
}

TestReport run_test(const Dataset& data, const TestConfig& config) {
    return run_impl(data, config, false).report;
}

}  // namespace hetseg
